#include "hopfavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hopfavg/errors.hpp"
#include "hopfavg/kernels.hpp"

namespace hopfavg {
namespace {

constexpr double kDegenerateDerivative = 1e-9;

double bisect(const AveragedModel& am, double lo, double hi, double f_lo) {
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = am(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Stability classify(double derivative) {
    if (std::fabs(derivative) < kDegenerateDerivative) return Stability::degenerate;
    return derivative < 0.0 ? Stability::stable : Stability::unstable;
}

}  // namespace

ReducedNonlinearity::ReducedNonlinearity(std::vector<DelayedMonomial> terms, std::vector<double> delays,
                                         CenterBasis basis)
    : terms_(std::move(terms)), delays_(std::move(delays)), basis_(basis) {
    for (const auto& m : terms_) {
        if (m.factors.empty()) throw InvalidArgument("reduced nonlinearity: monomials need degree >= 1");
        for (const auto& f : m.factors) {
            if (f.delay_index >= delays_.size() || f.power < 1) {
                throw InvalidArgument("reduced nonlinearity: bad delay factor");
            }
        }
    }
}

ReducedNonlinearity ReducedNonlinearity::from_model(const PolynomialDDE& model, const CenterBasis& basis) {
    return ReducedNonlinearity(model.nonlinear_terms(), model.delays(), basis);
}

double ReducedNonlinearity::period() const noexcept { return 2.0 * std::numbers::pi / basis_.omega_star(); }

double ReducedNonlinearity::nonlinearity(double xi, double rho) const {
    const double w = basis_.omega_star();
    double total = 0.0;
    for (const auto& m : terms_) {
        double prod = m.coefficient;
        for (const auto& f : m.factors) {
            const double x = -rho * std::cos(w * (xi - delays_[f.delay_index]));
            for (int p = 0; p < f.power; ++p) prod *= x;
        }
        total += prod;
    }
    return total;
}

double amplitude_field(const ReducedNonlinearity& rn, double xi, double rho) {
    const CenterBasis& b = rn.basis();
    const double w = b.omega_star();
    return (b.beta1() * std::sin(w * xi) - b.beta2() * std::cos(w * xi)) * rn.nonlinearity(xi, rho);
}

std::optional<CubicFamily> detect_cubic(const ReducedNonlinearity& rn) {
    if (rn.terms().empty()) return std::nullopt;
    std::optional<std::size_t> delay;
    CubicFamily family;
    for (const auto& m : rn.terms()) {
        if (m.factors.size() != 1) return std::nullopt;
        const auto& f = m.factors.front();
        if (delay && rn.delays()[*delay] != rn.delays()[f.delay_index]) return std::nullopt;
        delay = f.delay_index;
        if (f.power == 1) family.a3 -= m.coefficient;
        else if (f.power == 3) family.a4 += m.coefficient;
        else return std::nullopt;
    }
    family.tau3 = rn.delays()[*delay];
    return family;
}

AveragedModel::AveragedModel(ReducedNonlinearity rn, int nodes)
    : rn_(std::move(rn)), nodes_(nodes), cubic_(detect_cubic(rn_)) {
    if (nodes_ < 8) throw InvalidArgument("averaging needs at least 8 quadrature nodes");
    const CenterBasis& b = rn_.basis();
    const double w = b.omega_star();
    const double h = rn_.period() / nodes_;
    const std::size_t n_delays = rn_.delays().size();
    weights_.resize(nodes_);
    orbit_.resize(static_cast<std::size_t>(nodes_) * n_delays);
    for (int k = 0; k < nodes_; ++k) {
        const double xi = k * h;
        weights_[k] = (b.beta1() * std::sin(w * xi) - b.beta2() * std::cos(w * xi)) / nodes_;
        for (std::size_t j = 0; j < n_delays; ++j) {
            orbit_[k * n_delays + j] = -std::cos(w * (xi - rn_.delays()[j]));
        }
    }
}

double AveragedModel::operator()(double rho) const {
    const std::size_t n_delays = rn_.delays().size();
    std::vector<double> values(nodes_);
    for (int k = 0; k < nodes_; ++k) {
        const double* orbit = orbit_.data() + k * n_delays;
        double total = 0.0;
        for (const auto& m : rn_.terms()) {
            double prod = m.coefficient;
            for (const auto& f : m.factors) {
                const double x = rho * orbit[f.delay_index];
                for (int p = 0; p < f.power; ++p) prod *= x;
            }
            total += prod;
        }
        values[k] = total;
    }
    return kernels::active().weighted_sum(weights_, values);
}

std::optional<double> AveragedModel::closed_form(double rho) const {
    if (!cubic_) return std::nullopt;
    const double c = rn_.basis().delay_factor(cubic_->tau3);
    return 0.125 * rho * (3.0 * cubic_->a4 * rho * rho - 4.0 * cubic_->a3) * c;
}

std::optional<double> AveragedModel::closed_form_derivative(double rho) const {
    if (!cubic_) return std::nullopt;
    const double c = rn_.basis().delay_factor(cubic_->tau3);
    return 0.125 * (9.0 * cubic_->a4 * rho * rho - 4.0 * cubic_->a3) * c;
}

double AveragedModel::derivative(double rho) const {
    if (auto exact = closed_form_derivative(rho)) return *exact;
    constexpr double step = 1e-6;
    return ((*this)(rho + step) - (*this)(rho - step)) / (2.0 * step);
}

AveragedModel average(const ReducedNonlinearity& rn, int nodes) { return AveragedModel(rn, nodes); }

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(AveragedLimit::Kind k) {
    switch (k) {
        case AveragedLimit::Kind::zero: return "zero";
        case AveragedLimit::Kind::orbit: return "orbit";
        case AveragedLimit::Kind::unbounded: return "unbounded";
    }
    return "?";
}

double default_rho_max(const ReducedNonlinearity& rn) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& m : rn.terms()) {
        const double c = std::fabs(m.coefficient);
        if (c == 0.0) continue;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    if (hi == 0.0) return 10.0;
    return 10.0 * std::sqrt(hi / lo);
}

std::vector<Equilibrium> find_equilibria(const AveragedModel& am, double rho_max) {
    if (!(rho_max > 0.0)) throw InvalidArgument("rho_max must be positive");
    constexpr int grid = 10000;
    const CenterBasis& b = am.reduced().basis();
    // Values below this are rounding noise of the quadrature, not sign information.
    auto noise_floor = [&](double rho) {
        double s = 0.0;
        for (const auto& m : am.reduced().terms()) s += std::fabs(m.coefficient) * std::pow(rho, m.degree());
        return 1e-12 * s * (std::fabs(b.beta1()) + std::fabs(b.beta2()));
    };
    std::vector<Equilibrium> out;
    double last_r = 0.0;
    double last_f = 0.0;
    for (int i = 1; i <= grid; ++i) {
        const double r = rho_max * i / grid;
        const double f = am(r);
        if (std::fabs(f) <= noise_floor(r)) continue;
        if (last_f != 0.0 && (f < 0.0) != (last_f < 0.0)) {
            const double rho = bisect(am, last_r, r, last_f);
            const double d = am.derivative(rho);
            out.push_back({rho, d, classify(d)});
        }
        last_r = r;
        last_f = f;
    }
    return out;
}

std::vector<PeriodicPrediction> predict(const AveragedModel& am, const std::vector<Equilibrium>& equilibria) {
    std::vector<PeriodicPrediction> out;
    for (const auto& e : equilibria) {
        if (e.stability == Stability::degenerate) continue;
        PeriodicPrediction p;
        p.rho_star = e.rho_star;
        p.period = am.reduced().period();
        p.stability = e.stability;
        p.validity_note = "first-order averaging; holds for sufficiently small epsilon, with O(epsilon) "
                          "corrections to amplitude and frequency";
        out.push_back(std::move(p));
    }
    return out;
}

AveragedLimit averaged_limit(const AveragedModel& am, const std::vector<Equilibrium>& equilibria, double rho0) {
    if (!(rho0 > 0.0)) return {AveragedLimit::Kind::zero, 0.0};
    for (const auto& e : equilibria) {
        if (std::fabs(e.rho_star - rho0) <= 1e-9) return {AveragedLimit::Kind::orbit, e.rho_star};
    }
    const double drift = am(rho0);
    if (drift < 0.0) {
        double below = 0.0;
        for (const auto& e : equilibria) {
            if (e.rho_star < rho0) below = std::max(below, e.rho_star);
        }
        if (below == 0.0) return {AveragedLimit::Kind::zero, 0.0};
        return {AveragedLimit::Kind::orbit, below};
    }
    if (drift > 0.0) {
        double above = std::numeric_limits<double>::infinity();
        for (const auto& e : equilibria) {
            if (e.rho_star > rho0) above = std::min(above, e.rho_star);
        }
        if (!std::isfinite(above)) return {AveragedLimit::Kind::unbounded, 0.0};
        return {AveragedLimit::Kind::orbit, above};
    }
    return {AveragedLimit::Kind::orbit, rho0};
}

}  // namespace hopfavg
