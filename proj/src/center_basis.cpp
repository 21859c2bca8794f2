#include "hopfavg/center_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hopfavg/dde.hpp"
#include "hopfavg/errors.hpp"

namespace hopfavg {

CenterBasis::CenterBasis(double omega_star, double tau2_0, double alpha1, double beta1, double alpha2, double beta2)
    : omega_(omega_star), tau2_0_(tau2_0), alpha1_(alpha1), beta1_(beta1), alpha2_(alpha2), beta2_(beta2) {
    if (!(omega_star > 0.0) || !(tau2_0 > 0.0)) throw InvalidArgument("center basis needs omega* > 0 and tau2_0 > 0");
}

std::array<double, 2> CenterBasis::phi(double theta) const {
    return {std::sin(omega_ * theta), std::cos(omega_ * theta)};
}

std::array<double, 2> CenterBasis::psi(double s) const {
    const double sn = std::sin(omega_ * s);
    const double cs = std::cos(omega_ * s);
    return {alpha1_ * sn + beta1_ * cs, alpha2_ * sn + beta2_ * cs};
}

double CenterBasis::delay_factor(double tau) const {
    return beta2_ * std::cos(omega_ * tau) - beta1_ * std::sin(omega_ * tau);
}

double pair(const BilinearForm& bf, const std::function<double(double)>& psi, const std::function<double(double)>& phi,
            const SimpsonOptions& options) {
    // The a1 contribution lives on [-tau1, 0] only: psi is defined on [0, tau2_0].
    const double first = simpson([&](double xi) { return psi(xi + bf.tau1) * phi(xi); }, -bf.tau1, 0.0, options);
    const double second =
        simpson([&](double xi) { return psi(xi + bf.tau2_0) * phi(xi); }, -bf.tau2_0, 0.0, options);
    return psi(0.0) * phi(0.0) - bf.a1 * first - bf.a2 * second;
}

Matrix2 gram_residual_matrix(const BilinearForm& bf, const CenterBasis& basis, const SimpsonOptions& options) {
    Matrix2 out{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out[i][j] = pair(
                bf, [&](double s) { return basis.psi(s)[i]; }, [&](double t) { return basis.phi(t)[j]; }, options);
        }
    }
    return out;
}

double normalization_residual(const BilinearForm& bf, const CenterBasis& basis, const SimpsonOptions& options) {
    const Matrix2 g = gram_residual_matrix(bf, basis, options);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::fabs(g[i][j] - (i == j ? 1.0 : 0.0)));
    }
    return worst;
}

CenterBasis closed_form_basis(double omega_star, double tau2_0) {
    const double x = omega_star * tau2_0;
    const double s = std::sin(x);
    const double den = x * x + s * s;
    return CenterBasis(omega_star, tau2_0, (4.0 - 2.0 * s * s) / den, (2.0 * x + std::sin(2.0 * x)) / den,
                       (std::sin(2.0 * x) - 2.0 * x) / den, 2.0 * s * s / den);
}

Normalization normalize(const HopfPoint& hp, const BilinearForm& bf, const SimpsonOptions& options) {
    if (!(bf.tau1 < bf.tau2_0)) throw InvalidArgument("normalization requires tau1 < tau2_0");
    const double w = hp.omega_star;
    const std::function<double(double)> sine = [w](double s) { return std::sin(w * s); };
    const std::function<double(double)> cosine = [w](double s) { return std::cos(w * s); };
    const std::function<double(double)>* duals[2] = {&sine, &cosine};
    const std::function<double(double)>* primals[2] = {&sine, &cosine};

    Matrix2 m{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) m[r][c] = pair(bf, *duals[r], *primals[c], options);
    }
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::fabs(det) < 1e-12) throw DegeneracyError("singular Gram matrix: the imaginary root pair is not simple");

    // Coefficient rows (alpha_i, beta_i) form K with K M = I.
    const double k00 = m[1][1] / det, k01 = -m[0][1] / det;
    const double k10 = -m[1][0] / det, k11 = m[0][0] / det;
    CenterBasis gram(w, hp.tau2_0, k00, k01, k10, k11);
    CenterBasis closed = closed_form_basis(w, hp.tau2_0);

    Normalization out{gram, closed, m, 0.0, 0.0, 0.0};
    out.residual = normalization_residual(bf, gram, options);
    out.closed_form_residual = normalization_residual(bf, closed, options);
    out.discrepancy = std::max({std::fabs(gram.alpha1() - closed.alpha1()), std::fabs(gram.beta1() - closed.beta1()),
                                std::fabs(gram.alpha2() - closed.alpha2()), std::fabs(gram.beta2() - closed.beta2())});
    return out;
}

std::array<double, 2> project(const CenterBasis& basis, const BilinearForm& bf,
                              const std::function<double(double)>& phi, const SimpsonOptions& options) {
    return {pair(bf, [&](double s) { return basis.psi(s)[0]; }, phi, options),
            pair(bf, [&](double s) { return basis.psi(s)[1]; }, phi, options)};
}

std::array<double, 2> project(const CenterBasis& basis, const BilinearForm& bf, const HistoryFunction& phi,
                              const SimpsonOptions& options) {
    return project(basis, bf, std::function<double(double)>([&](double t) { return phi(t); }), options);
}

PolarPoint polar_initial(double y1, double y2, double omega_star) {
    const double rho = std::hypot(y1, y2);
    if (rho == 0.0) return {0.0, 0.0};
    const double two_pi = 2.0 * std::numbers::pi;
    double angle = std::atan2(y1, -y2) + 0.0;
    if (angle < 0.0) angle += two_pi;
    if (angle >= two_pi) angle -= two_pi;
    return {rho, angle / omega_star};
}

}  // namespace hopfavg
