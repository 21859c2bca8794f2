#include "hopfavg/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "hopfavg/errors.hpp"
#include "hopfavg/report.hpp"

namespace hopfavg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(w r1) - RHS(w) for the applicable sign case.
double frequency_residual(const ScaledProblem& p, double w) {
    const double rhs = p.sign_case == SignCase::positive ? (w * w + 1.0 - p.a * p.a) / (2.0 * w)
                                                         : (p.a * p.a - w * w - 1.0) / (2.0 * w);
    return std::sin(w * p.r1) - rhs;
}

// Residuals of the two real equations of the imaginary-root system at (w, r2).
struct SystemResidual {
    double cosine;
    double sine;
};

SystemResidual system_residual(const ScaledProblem& p, double w, double r2) {
    if (p.sign_case == SignCase::positive) {
        return {std::cos(w * p.r1) + p.a * std::cos(w * r2), w - std::sin(w * p.r1) - p.a * std::sin(w * r2)};
    }
    return {std::cos(w * p.r1) - p.a * std::cos(w * r2), w + std::sin(w * p.r1) - p.a * std::sin(w * r2)};
}

// Minimal r2 > 0 solving the full system for frequency w, if any.
std::optional<double> minimal_r2(const ScaledProblem& p, double w) {
    const double cos_target = p.sign_case == SignCase::positive ? -std::cos(w * p.r1) / p.a : std::cos(w * p.r1) / p.a;
    const double sin_target = p.sign_case == SignCase::positive ? (w - std::sin(w * p.r1)) / p.a
                                                                : (w + std::sin(w * p.r1)) / p.a;
    if (std::fabs(cos_target) > 1.0 + 1e-12) return std::nullopt;
    const double base = std::acos(std::clamp(cos_target, -1.0, 1.0));
    // Squaring merged the branches theta and 2 pi - theta; the sine equation picks one.
    double angle = sin_target >= 0.0 ? base : kTwoPi - base;
    if (angle <= 0.0) angle += kTwoPi;
    const double r2 = angle / w;
    const SystemResidual res = system_residual(p, w, r2);
    const double tol = 1e-10 * std::max(1.0, w);
    if (std::fabs(res.cosine) > tol || std::fabs(res.sine) > tol) return std::nullopt;
    return r2;
}

}  // namespace

TwoDelayLinear::TwoDelayLinear(double a1, double a2, double tau1) : a1_(a1), a2_(a2), tau1_(tau1) {
    if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(tau1)) {
        throw InvalidArgument("two-delay coefficients must be finite");
    }
    if (a1 == 0.0) throw InvalidArgument("a1 must be nonzero");
    if (!(a2 > 0.0)) throw InvalidArgument("a2 must be positive");
    if (!(tau1 > 0.0)) throw InvalidArgument("tau1 must be positive");
    if (!(a1 + a2 > 0.0)) {
        throw InvalidArgument("a1 + a2 must be positive (a1 + a2 = 0 puts z = 0 on the spectrum, < 0 is unstable)");
    }
}

ScaledProblem scale(const TwoDelayLinear& m) {
    const double mag = std::fabs(m.a1());
    return {m.a2() / mag, m.tau1() * mag, m.a1() > 0.0 ? SignCase::positive : SignCase::negative};
}

TwoDelayLinear unscale(const ScaledProblem& p, double a1_magnitude) {
    const double a1 = p.sign_case == SignCase::positive ? a1_magnitude : -a1_magnitude;
    return TwoDelayLinear(a1, p.a * a1_magnitude, p.r1 / a1_magnitude);
}

std::vector<double> candidate_frequencies(const ScaledProblem& p) {
    if (!(p.a > 0.0) || !(p.r1 > 0.0)) throw InvalidArgument("scaled problem needs a > 0 and r1 > 0");
    constexpr double lo = 1e-6;
    constexpr double step = 1e-3;
    const double hi = p.a + 2.0;
    std::vector<double> roots;
    double w0 = lo;
    double g0 = frequency_residual(p, w0);
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t i = 1; i <= steps; ++i) {
        const double w1 = std::min(hi, lo + static_cast<double>(i) * step);
        const double g1 = frequency_residual(p, w1);
        if (g0 == 0.0) {
            roots.push_back(w0);
        } else if (g0 * g1 < 0.0) {
            double a = w0, b = w1, ga = g0;
            for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
                const double mid = 0.5 * (a + b);
                const double gm = frequency_residual(p, mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        w0 = w1;
        g0 = g1;
    }
    if (g0 == 0.0) roots.push_back(w0);
    return roots;
}

HopfPoint critical_delay(const ScaledProblem& p, const std::vector<double>& omegas, double a1_magnitude) {
    if (omegas.empty()) throw NoHopfError("no candidate frequency: the linear part has no imaginary roots");
    double best_r2 = std::numeric_limits<double>::infinity();
    double best_w = 0.0;
    bool tie = false;
    for (double w : omegas) {
        const auto r2 = minimal_r2(p, w);
        if (!r2) continue;
        if (std::fabs(*r2 - best_r2) <= 1e-10 && std::fabs(w - best_w) > 1e-10) {
            tie = true;
        } else if (*r2 < best_r2) {
            best_r2 = *r2;
            best_w = w;
            tie = false;
        }
    }
    if (!std::isfinite(best_r2)) throw NoHopfError("no candidate frequency admits a consistent critical delay");
    if (tie) {
        throw DegeneracyError("two frequencies reach the same critical delay r2 = " + format_number(best_r2));
    }
    HopfPoint hp;
    hp.omega_scaled = best_w;
    hp.r2_0 = best_r2;
    hp.omega_star = best_w * a1_magnitude;
    hp.tau2_0 = best_r2 / a1_magnitude;
    hp.branch = p.sign_case == SignCase::positive ? HopfBranch::plus : HopfBranch::minus;
    hp.omega_condition_value = best_w * best_r2;
    return hp;
}

std::complex<double> characteristic_value(const TwoDelayLinear& m, std::complex<double> z, double tau2) {
    return z + m.a1() * std::exp(-z * m.tau1()) + m.a2() * std::exp(-z * tau2);
}

std::complex<double> characteristic_derivative(const TwoDelayLinear& m, std::complex<double> z, double tau2) {
    return 1.0 - m.a1() * m.tau1() * std::exp(-z * m.tau1()) - m.a2() * tau2 * std::exp(-z * tau2);
}

std::complex<double> root_velocity(const TwoDelayLinear& m, std::complex<double> lambda, double tau2) {
    return m.a2() * lambda * std::exp(-lambda * tau2) / characteristic_derivative(m, lambda, tau2);
}

std::complex<double> refine_root(const TwoDelayLinear& m, double tau2, std::complex<double> guess) {
    std::complex<double> z = guess;
    for (int it = 0; it < 60; ++it) {
        const std::complex<double> step = characteristic_value(m, z, tau2) / characteristic_derivative(m, z, tau2);
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

HopfPoint find_hopf_point(const TwoDelayLinear& m) {
    const ScaledProblem p = scale(m);
    HopfPoint hp = critical_delay(p, candidate_frequencies(p), std::fabs(m.a1()));
    const std::complex<double> lambda(0.0, hp.omega_star);
    hp.transversality = root_velocity(m, lambda, hp.tau2_0);
    hp.simple = std::abs(characteristic_derivative(m, lambda, hp.tau2_0)) > 1e-10;
    return hp;
}

bool in_omega_set(double value) {
    if (value < 0.0) return false;
    return std::fmod(value, kTwoPi) <= 0.5 * std::numbers::pi;
}

HypothesisReport verify_hypotheses(const TwoDelayLinear& m, const HopfPoint& hp) {
    HypothesisReport report;
    const std::complex<double> lambda(0.0, hp.omega_star);
    report.transversality = root_velocity(m, lambda, hp.tau2_0);
    if (std::fabs(report.transversality.real()) <= 1e-10) {
        throw DegeneracyError("degenerate transversality: Re(d lambda / d tau2) = " +
                              format_number(report.transversality.real()));
    }
    report.transversal = true;
    report.dh_dlambda = characteristic_derivative(m, lambda, hp.tau2_0);
    report.simple = std::abs(report.dh_dlambda) > 1e-10;

    report.roots_near_axis =
        count_roots_in_rectangle(m, hp.tau2_0, -1e-3, 1e-3, -2.0 * hp.omega_star, 2.0 * hp.omega_star);
    report.no_other_axis_roots = report.roots_near_axis == 2;

    const ScaledProblem p = scale(m);
    report.unique_frequency = true;
    for (double w : candidate_frequencies(p)) {
        if (std::fabs(w - hp.omega_scaled) <= 1e-9) continue;
        const SystemResidual res = system_residual(p, w, hp.r2_0);
        if (std::fabs(res.cosine) <= 1e-8 && std::fabs(res.sine) <= 1e-8) report.unique_frequency = false;
    }
    report.h_at_zero = m.a1() + m.a2();
    report.omega_condition_value = hp.omega_scaled * hp.r2_0;
    report.in_omega = in_omega_set(report.omega_condition_value);
    report.h_residual = std::abs(characteristic_value(m, lambda, hp.tau2_0));
    return report;
}

}  // namespace hopfavg
