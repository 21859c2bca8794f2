#include "hopfavg/kernels.hpp"

#include <cmath>

namespace hopfavg::kernels {
namespace {

double weighted_sum(std::span<const double> w, std::span<const double> v) {
    const std::size_t n = w.size();
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) acc[l] += w[i + l] * v[i + l];
    }
    double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
    for (; i < n; ++i) total += w[i] * v[i];
    return total;
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void offset(std::span<double> out, std::span<const double> x, double a, std::span<const double> k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + a * k[i];
}

void multiply(std::span<double> y, std::span<const double> x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= x[i];
}

void hermite(std::span<double> out, const HermiteWeights& w, std::span<const double> x0,
             std::span<const double> d0, std::span<const double> x1, std::span<const double> d1) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ((w.w[0] * x0[i] + w.w[1] * d0[i]) + w.w[2] * x1[i]) + w.w[3] * d1[i];
    }
}

void rk4_combine(std::span<double> out, std::span<const double> x, double h,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4) {
    const double s = h / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double sum = ((k1[i] + 2.0 * k2[i]) + 2.0 * k3[i]) + k4[i];
        out[i] = x[i] + s * sum;
    }
}

void exceeds(std::span<unsigned char> flags, std::span<const double> x, double bound) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        // NaN fails the comparison and is flagged.
        flags[i] = std::fabs(x[i]) <= bound ? 0 : 1;
    }
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{
        "scalar", weighted_sum, axpy, offset, multiply, hermite, rk4_combine, exceeds,
    };
    return table;
}

}  // namespace hopfavg::kernels
