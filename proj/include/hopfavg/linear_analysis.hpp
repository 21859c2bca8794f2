#pragma once

// Hopf points of x'(t) = -a1 x(t - tau1) - a2 x(t - tau2) with tau2 as the
// bifurcation parameter.

#include <complex>
#include <vector>

namespace hopfavg {

class TwoDelayLinear {
public:
    /// Throws InvalidArgument unless a1 != 0, a2 > 0, tau1 > 0 and a1 + a2 > 0.
    TwoDelayLinear(double a1, double a2, double tau1);

    double a1() const noexcept { return a1_; }
    double a2() const noexcept { return a2_; }
    double tau1() const noexcept { return tau1_; }

private:
    double a1_;
    double a2_;
    double tau1_;
};

enum class SignCase { positive, negative };

/// Dimensionless problem in the time scale 1/|a1|.
struct ScaledProblem {
    double a = 0.0;   // a2 / |a1|
    double r1 = 0.0;  // tau1 * |a1|
    SignCase sign_case = SignCase::positive;
};

ScaledProblem scale(const TwoDelayLinear& m);
TwoDelayLinear unscale(const ScaledProblem& p, double a1_magnitude);

enum class HopfBranch { plus, minus };

struct HopfPoint {
    double omega_star = 0.0;  // original time scale
    double tau2_0 = 0.0;      // original time scale
    HopfBranch branch = HopfBranch::plus;
    double omega_scaled = 0.0;
    double r2_0 = 0.0;
    std::complex<double> transversality;  // d lambda / d tau2 at lambda = i omega*
    bool simple = false;
    double omega_condition_value = 0.0;   // omega_scaled * r2_0 (= omega* tau2_0)
};

/// Positive roots of sin(w r1) = (w^2 + 1 - a^2) / (2w) (positive case) or
/// (a^2 - w^2 - 1) / (2w) (negative case), ascending.
std::vector<double> candidate_frequencies(const ScaledProblem& p);

/// Smallest r2 > 0 over all candidate frequencies for which both equations of
/// the imaginary-root system hold. Throws NoHopfError when none exists and
/// DegeneracyError on ties between distinct frequencies.
HopfPoint critical_delay(const ScaledProblem& p, const std::vector<double>& omegas, double a1_magnitude);

/// Convenience: scale, find candidates, pick the critical delay, and fill the
/// transversality and simplicity fields.
HopfPoint find_hopf_point(const TwoDelayLinear& m);

/// h(z) = z + a1 exp(-z tau1) + a2 exp(-z tau2)
std::complex<double> characteristic_value(const TwoDelayLinear& m, std::complex<double> z, double tau2);

/// dh/dz = 1 - a1 tau1 exp(-z tau1) - a2 tau2 exp(-z tau2)
std::complex<double> characteristic_derivative(const TwoDelayLinear& m, std::complex<double> z, double tau2);

/// d lambda / d tau2 along the root branch through lambda.
std::complex<double> root_velocity(const TwoDelayLinear& m, std::complex<double> lambda, double tau2);

/// Number of zeros of h(., tau2) inside the rectangle, by the argument principle.
int count_roots_in_rectangle(const TwoDelayLinear& m, double tau2, double re_lo, double re_hi,
                             double im_lo, double im_hi);

/// Number of zeros with real part > sigma. Roots with Re >= 0 satisfy
/// |z| <= |a1| + |a2|, which bounds the search box.
int count_roots_right_of(const TwoDelayLinear& m, double tau2, double sigma = 0.0);

/// Newton iteration on h(., tau2) from an initial guess.
std::complex<double> refine_root(const TwoDelayLinear& m, double tau2, std::complex<double> guess);

struct HypothesisReport {
    std::complex<double> transversality;
    bool transversal = false;
    std::complex<double> dh_dlambda;
    bool simple = false;
    int roots_near_axis = 0;  // zeros in the thin strip around the imaginary axis
    bool no_other_axis_roots = false;
    bool unique_frequency = false;  // no other candidate reaches the same tau2_0
    double h_at_zero = 0.0;
    double omega_condition_value = 0.0;
    bool in_omega = false;
    double h_residual = 0.0;  // |h(i omega*, tau2_0)|
};

/// Transversality, simplicity and the imaginary-axis uniqueness checks.
/// Throws DegeneracyError when Re(d lambda / d tau2) vanishes.
HypothesisReport verify_hypotheses(const TwoDelayLinear& m, const HopfPoint& hp);

/// Membership in the union of [2 l pi, pi/2 + 2 l pi], l >= 0.
bool in_omega_set(double value);

}  // namespace hopfavg
