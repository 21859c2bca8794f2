#include <algorithm>
#include <cmath>
#include <limits>

#include "hopfavg/dde.hpp"

namespace hopfavg {

int DelayedMonomial::degree() const {
    int total = 0;
    for (const auto& f : factors) total += f.power;
    return total;
}

PolynomialDDE::PolynomialDDE(std::vector<double> delays, std::vector<LinearTerm> linear, double epsilon,
                             std::vector<DelayedMonomial> nonlinear)
    : delays_(std::move(delays)), linear_(std::move(linear)), epsilon_(epsilon),
      nonlinear_(std::move(nonlinear)) {
    for (double d : delays_) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("delays must be finite and >= 0");
        max_delay_ = std::max(max_delay_, d);
    }
    if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) throw InvalidArgument("epsilon must be finite and >= 0");
    for (const auto& term : linear_) {
        if (term.delay_index >= delays_.size()) throw InvalidArgument("linear term references an unknown delay");
    }
    for (const auto& m : nonlinear_) {
        if (m.factors.empty()) throw InvalidArgument("nonlinear monomial must have degree >= 1");
        for (const auto& f : m.factors) {
            if (f.delay_index >= delays_.size()) throw InvalidArgument("monomial references an unknown delay");
            if (f.power < 1) throw InvalidArgument("monomial powers must be >= 1");
        }
    }
}

double PolynomialDDE::min_positive_delay() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (double d : delays_) {
        if (d > 0.0) best = std::min(best, d);
    }
    return best;
}

PolynomialDDE PolynomialDDE::with_epsilon(double epsilon) const {
    return PolynomialDDE(delays_, linear_, epsilon, nonlinear_);
}

// The operation order here matches the lane-batched evaluation in the integrator.
double evaluate_rhs(const PolynomialDDE& model, std::span<const double> delayed) {
    double out = 0.0;
    for (const auto& term : model.linear_terms()) out += term.coefficient * delayed[term.delay_index];
    if (!model.nonlinear_terms().empty()) {
        double nl = 0.0;
        for (const auto& m : model.nonlinear_terms()) {
            double prod = m.coefficient;
            for (const auto& f : m.factors) {
                for (int p = 0; p < f.power; ++p) prod *= delayed[f.delay_index];
            }
            nl += 1.0 * prod;
        }
        out += model.epsilon() * nl;
    }
    return out;
}

double evaluate_rhs(const PolynomialDDE& model, double t, const std::function<double(double)>& past) {
    std::vector<double> delayed(model.delays().size());
    for (std::size_t i = 0; i < delayed.size(); ++i) delayed[i] = past(t - model.delays()[i]);
    return evaluate_rhs(model, delayed);
}

}  // namespace hopfavg
