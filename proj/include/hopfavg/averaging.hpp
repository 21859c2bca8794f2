#pragma once

// First-order averaging of the amplitude equation rho' = eps F(xi, rho) with
//
//   F(xi, rho) = (beta1 sin(w xi) - beta2 cos(w xi)) f(Phi y),
//
// where every delayed factor x(t - tau) is replaced by -rho cos(w (xi - tau)).

#include <optional>
#include <string>
#include <vector>

#include "hopfavg/center_basis.hpp"
#include "hopfavg/dde.hpp"

namespace hopfavg {

class ReducedNonlinearity {
public:
    /// Throws InvalidArgument for degree-0 monomials or unknown delay indices.
    ReducedNonlinearity(std::vector<DelayedMonomial> terms, std::vector<double> delays, CenterBasis basis);

    /// The epsilon-scaled part of `model`, without epsilon.
    static ReducedNonlinearity from_model(const PolynomialDDE& model, const CenterBasis& basis);

    /// f evaluated on the center-space orbit point (rho, xi).
    double nonlinearity(double xi, double rho) const;

    const std::vector<DelayedMonomial>& terms() const noexcept { return terms_; }
    const std::vector<double>& delays() const noexcept { return delays_; }
    const CenterBasis& basis() const noexcept { return basis_; }
    double period() const noexcept;

private:
    std::vector<DelayedMonomial> terms_;
    std::vector<double> delays_;
    CenterBasis basis_;
};

/// F(xi, rho)
double amplitude_field(const ReducedNonlinearity& rn, double xi, double rho);

/// a4 x^3(t - tau3) - a3 x(t - tau3): the family with a closed-form average.
struct CubicFamily {
    double a3 = 0.0;
    double a4 = 0.0;
    double tau3 = 0.0;
};

std::optional<CubicFamily> detect_cubic(const ReducedNonlinearity& rn);

class AveragedModel {
public:
    explicit AveragedModel(ReducedNonlinearity rn, int nodes = 4096);

    /// F0(rho) by the trapezoidal rule over one period.
    double operator()(double rho) const;

    /// (1/8) rho (3 a4 rho^2 - 4 a3) (beta2 cos(w tau3) - beta1 sin(w tau3)), cubic family only.
    std::optional<double> closed_form(double rho) const;
    std::optional<double> closed_form_derivative(double rho) const;

    /// Closed-form derivative when available, otherwise a central difference
    /// with step 1e-6.
    double derivative(double rho) const;

    const ReducedNonlinearity& reduced() const noexcept { return rn_; }
    const std::optional<CubicFamily>& cubic() const noexcept { return cubic_; }
    int nodes() const noexcept { return nodes_; }

private:
    ReducedNonlinearity rn_;
    int nodes_;
    std::optional<CubicFamily> cubic_;
    std::vector<double> weights_;  // (beta1 sin - beta2 cos) / N at each node
    std::vector<double> orbit_;    // -cos(w (xi_k - tau_j)), node-major
};

AveragedModel average(const ReducedNonlinearity& rn, int nodes = 4096);

enum class Stability { stable, unstable, degenerate };

const char* to_string(Stability s);

struct Equilibrium {
    double rho_star = 0.0;
    double derivative = 0.0;
    Stability stability = Stability::degenerate;
};

/// 10 * sqrt(max|c| / min|c|) over the nonzero monomial coefficients.
double default_rho_max(const ReducedNonlinearity& rn);

/// Sign changes of F0 on a 10^4-point grid over (0, rho_max], bisected to 1e-12.
std::vector<Equilibrium> find_equilibria(const AveragedModel& am, double rho_max);

struct PeriodicPrediction {
    double rho_star = 0.0;
    double period = 0.0;
    Stability stability = Stability::stable;  // on the center manifold
    std::string validity_note;
};

/// One prediction per non-degenerate positive equilibrium.
std::vector<PeriodicPrediction> predict(const AveragedModel& am, const std::vector<Equilibrium>& equilibria);

/// Where the averaged flow rho' = eps F0(rho) (eps > 0) carries rho0.
struct AveragedLimit {
    enum class Kind { zero, orbit, unbounded } kind = Kind::zero;
    double rho = 0.0;
};

AveragedLimit averaged_limit(const AveragedModel& am, const std::vector<Equilibrium>& equilibria, double rho0);

const char* to_string(AveragedLimit::Kind k);

}  // namespace hopfavg
