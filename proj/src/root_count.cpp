#include <cmath>
#include <numbers>

#include "hopfavg/errors.hpp"
#include "hopfavg/linear_analysis.hpp"

namespace hopfavg {
namespace {

using cplx = std::complex<double>;

// Change of arg h along the segment [z0, z1], subdividing until each piece
// turns by less than pi/4.
double arg_change(const TwoDelayLinear& m, double tau2, cplx z0, cplx z1, cplx h0, cplx h1, int depth) {
    const double d = std::arg(h1 / h0);
    if (std::fabs(d) < 0.25 * std::numbers::pi || depth >= 40) return d;
    const cplx zm = 0.5 * (z0 + z1);
    const cplx hm = characteristic_value(m, zm, tau2);
    if (hm == 0.0) throw DomainError("characteristic function vanishes on the counting contour");
    return arg_change(m, tau2, z0, zm, h0, hm, depth + 1) + arg_change(m, tau2, zm, z1, hm, h1, depth + 1);
}

}  // namespace

int count_roots_in_rectangle(const TwoDelayLinear& m, double tau2, double re_lo, double re_hi, double im_lo,
                             double im_hi) {
    if (!(re_hi > re_lo) || !(im_hi > im_lo)) throw InvalidArgument("empty counting rectangle");
    const cplx corners[5] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi}, {re_lo, im_hi}, {re_lo, im_lo}};
    constexpr int pieces = 256;
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cplx z0 = corners[e];
        cplx h0 = characteristic_value(m, z0, tau2);
        for (int i = 1; i <= pieces; ++i) {
            const cplx z1 = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(i) / pieces);
            const cplx h1 = characteristic_value(m, z1, tau2);
            if (h0 == 0.0 || h1 == 0.0) throw DomainError("characteristic function vanishes on the counting contour");
            total += arg_change(m, tau2, z0, z1, h0, h1, 0);
            z0 = z1;
            h0 = h1;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

int count_roots_right_of(const TwoDelayLinear& m, double tau2, double sigma) {
    const double shift = std::max(0.0, -sigma);
    const double bound = std::fabs(m.a1()) * std::exp(shift * m.tau1()) + std::fabs(m.a2()) * std::exp(shift * tau2) +
                         std::fabs(sigma) + 1.0;
    return count_roots_in_rectangle(m, tau2, sigma, bound, -bound, bound);
}

}  // namespace hopfavg
