#pragma once

// Real bases of the center space at a Hopf point of
// x'(t) = -a1 x(t - tau1) - a2 x(t - tau2_0):
//
//   Phi(theta) = (sin(w theta), cos(w theta)),             -tau2_0 <= theta <= 0
//   Psi_i(s)   = alpha_i sin(w s) + beta_i cos(w s),        0 <= s <= tau2_0
//
// normalized so that (Psi, Phi) = I under the bilinear form
//   (psi, phi) = psi(0) phi(0) - sum_j a_j int_{-tau_j}^0 psi(xi + tau_j) phi(xi) dxi.

#include <array>
#include <functional>

#include "hopfavg/linear_analysis.hpp"
#include "hopfavg/quadrature.hpp"

namespace hopfavg {

class HistoryFunction;

struct BilinearForm {
    double a1 = 0.0;
    double a2 = 0.0;
    double tau1 = 0.0;
    double tau2_0 = 0.0;

    static BilinearForm from(const TwoDelayLinear& m, const HopfPoint& hp) {
        return {m.a1(), m.a2(), m.tau1(), hp.tau2_0};
    }
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

class CenterBasis {
public:
    CenterBasis(double omega_star, double tau2_0, double alpha1, double beta1, double alpha2, double beta2);

    double omega_star() const noexcept { return omega_; }
    double tau2_0() const noexcept { return tau2_0_; }
    double alpha1() const noexcept { return alpha1_; }
    double beta1() const noexcept { return beta1_; }
    double alpha2() const noexcept { return alpha2_; }
    double beta2() const noexcept { return beta2_; }

    /// Generator B with Phi' = Phi B.
    Matrix2 generator() const noexcept { return {{{0.0, -omega_}, {omega_, 0.0}}}; }

    std::array<double, 2> phi(double theta) const;
    std::array<double, 2> psi(double s) const;

    /// beta2 cos(w tau) - beta1 sin(w tau): the factor multiplying the averaged
    /// cubic amplitude equation for a nonlinearity delayed by tau.
    double delay_factor(double tau) const;

private:
    double omega_;
    double tau2_0_;
    double alpha1_, beta1_, alpha2_, beta2_;
};

double pair(const BilinearForm& bf, const std::function<double(double)>& psi,
            const std::function<double(double)>& phi, const SimpsonOptions& options = {});

/// (Psi_i, Phi_j)
Matrix2 gram_residual_matrix(const BilinearForm& bf, const CenterBasis& basis, const SimpsonOptions& options = {});

/// max_ij |(Psi, Phi)_ij - delta_ij|
double normalization_residual(const BilinearForm& bf, const CenterBasis& basis, const SimpsonOptions& options = {});

/// Published closed-form coefficients, functions of (w, tau2_0) only.
CenterBasis closed_form_basis(double omega_star, double tau2_0);

struct Normalization {
    CenterBasis basis;          // Gram-normalized, authoritative
    CenterBasis closed_form;    // for comparison
    Matrix2 gram;               // rows: pair(sin, Phi_j), pair(cos, Phi_j)
    double residual = 0.0;              // for `basis`
    double closed_form_residual = 0.0;  // for `closed_form`
    double discrepancy = 0.0;           // max |coefficient difference|
};

/// Requires tau1 < tau2_0. Throws DegeneracyError when the Gram matrix is singular.
Normalization normalize(const HopfPoint& hp, const BilinearForm& bf, const SimpsonOptions& options = {});

/// ((Psi_1, phi), (Psi_2, phi))
std::array<double, 2> project(const CenterBasis& basis, const BilinearForm& bf,
                              const std::function<double(double)>& phi, const SimpsonOptions& options = {});
std::array<double, 2> project(const CenterBasis& basis, const BilinearForm& bf, const HistoryFunction& phi,
                              const SimpsonOptions& options = {});

struct PolarPoint {
    double rho = 0.0;
    double xi = 0.0;  // in [0, 2 pi / omega)
};

/// Inverse of y1 = rho sin(w xi), y2 = -rho cos(w xi). (0, 0) maps to rho = xi = 0.
PolarPoint polar_initial(double y1, double y2, double omega_star);

}  // namespace hopfavg
