#include "hopfavg/quadrature.hpp"

#include <cmath>
#include <vector>

#include "hopfavg/errors.hpp"

namespace hopfavg {

double simpson_fixed(const std::function<double(double)>& f, double lo, double hi, int panels,
                     const kernels::KernelTable& k) {
    if (panels < 2 || panels % 2 != 0) throw InvalidArgument("simpson: panel count must be even and >= 2");
    if (hi == lo) return 0.0;
    const double h = (hi - lo) / panels;
    std::vector<double> weights(panels + 1);
    std::vector<double> values(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        weights[i] = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        // Last node pinned to hi so the endpoint is evaluated exactly.
        const double x = i == panels ? hi : lo + i * h;
        values[i] = f(x);
    }
    return h / 3.0 * k.weighted_sum(weights, values);
}

double simpson(const std::function<double(double)>& f, double lo, double hi,
               const SimpsonOptions& options, const kernels::KernelTable& k) {
    int panels = options.initial_panels;
    double previous = simpson_fixed(f, lo, hi, panels, k);
    while (panels < options.max_panels) {
        panels *= 2;
        const double current = simpson_fixed(f, lo, hi, panels, k);
        if (std::fabs(current - previous) < options.tolerance) return current;
        previous = current;
    }
    return previous;
}

double periodic_mean(const std::function<double(double)>& f, double start, double period, int nodes,
                     const kernels::KernelTable& k) {
    if (nodes < 1) throw InvalidArgument("periodic_mean: need at least one node");
    const double h = period / nodes;
    std::vector<double> values(nodes);
    for (int i = 0; i < nodes; ++i) values[i] = f(start + i * h);
    const std::vector<double> weights(nodes, 1.0 / nodes);
    return k.weighted_sum(weights, values);
}

}  // namespace hopfavg
