#pragma once

// Scalar DDE initial-value problems with constant point delays and
// epsilon-scaled polynomial delayed nonlinearities:
//
//   x'(t) = sum_k c_k x(t - tau_{j_k}) + eps * sum_m c_m prod_f x(t - tau_{j_f})^{p_f}
//
// integrated by the method of steps on a fixed grid.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopfavg/errors.hpp"
#include "hopfavg/kernels.hpp"

namespace hopfavg {

struct DelayFactor {
    std::size_t delay_index = 0;
    int power = 1;
};

struct DelayedMonomial {
    double coefficient = 0.0;
    std::vector<DelayFactor> factors;

    int degree() const;
};

struct LinearTerm {
    double coefficient = 0.0;
    std::size_t delay_index = 0;
};

class PolynomialDDE {
public:
    /// Throws InvalidArgument on negative delays, bad delay indices, powers < 1
    /// or a negative epsilon.
    PolynomialDDE(std::vector<double> delays, std::vector<LinearTerm> linear, double epsilon,
                  std::vector<DelayedMonomial> nonlinear);

    const std::vector<double>& delays() const noexcept { return delays_; }
    const std::vector<LinearTerm>& linear_terms() const noexcept { return linear_; }
    const std::vector<DelayedMonomial>& nonlinear_terms() const noexcept { return nonlinear_; }
    double epsilon() const noexcept { return epsilon_; }
    double max_delay() const noexcept { return max_delay_; }

    /// Smallest strictly positive delay, or +inf when every delay is zero.
    double min_positive_delay() const noexcept;

    PolynomialDDE with_epsilon(double epsilon) const;

private:
    std::vector<double> delays_;
    std::vector<LinearTerm> linear_;
    double epsilon_;
    std::vector<DelayedMonomial> nonlinear_;
    double max_delay_ = 0.0;
};

/// Right-hand side from the delayed values, delayed[i] = x(t - delays[i]).
double evaluate_rhs(const PolynomialDDE& model, std::span<const double> delayed);

/// Right-hand side at time t with past values supplied by `past(s)`; the
/// accessor throws DomainError for unresolvable times.
double evaluate_rhs(const PolynomialDDE& model, double t, const std::function<double(double)>& past);

/// Initial function on [lower_bound, 0].
class HistoryFunction {
public:
    enum class Kind { constant, exponential, shifted_cosine, shifted_sine, tabulated, custom };

    static HistoryFunction constant(double c);
    /// c * exp(theta)
    static HistoryFunction exponential(double c);
    /// c * (cos(theta) + 1)
    static HistoryFunction shifted_cosine(double c);
    /// c * (sin(theta) + 1)
    static HistoryFunction shifted_sine(double c);
    /// Linear interpolation through (theta_i, x_i); theta increasing, last theta >= 0.
    static HistoryFunction tabulated(std::vector<double> theta, std::vector<double> values);
    static HistoryFunction custom(std::string label, std::function<double(double)> f,
                                  double lower_bound = -std::numeric_limits<double>::infinity());

    double operator()(double theta) const;

    Kind kind() const noexcept { return kind_; }
    double scale() const noexcept { return scale_; }
    double lower_bound() const noexcept { return lower_; }
    const std::string& label() const noexcept { return label_; }

private:
    HistoryFunction() = default;

    Kind kind_ = Kind::constant;
    double scale_ = 0.0;
    double lower_ = -std::numeric_limits<double>::infinity();
    std::string label_;
    std::shared_ptr<const std::vector<double>> theta_;
    std::shared_ptr<const std::vector<double>> samples_;
    std::function<double(double)> custom_;
};

/// Dense-output solution on [-max_delay, t_end]: history for t < 0, cubic
/// Hermite interpolation between grid nodes for t >= 0.
class Trajectory {
public:
    Trajectory(std::shared_ptr<const std::vector<double>> grid, std::vector<double> values,
               std::vector<double> slopes, HistoryFunction history,
               std::shared_ptr<const PolynomialDDE> model, std::optional<double> blowup_time);

    double query(double t) const;

    double t_end() const noexcept { return (*grid_)[values_.size() - 1]; }
    double t_min() const noexcept { return -model_->max_delay(); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> times() const noexcept { return {grid_->data(), values_.size()}; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> slopes() const noexcept { return slopes_; }

    const HistoryFunction& history() const noexcept { return history_; }
    const PolynomialDDE& model() const noexcept { return *model_; }

    /// Set when the overflow guard stopped this trajectory; the stored nodes end
    /// at the last node that passed the guard.
    std::optional<double> blowup_time() const noexcept { return blowup_time_; }
    bool diverged() const noexcept { return blowup_time_.has_value(); }

private:
    std::shared_ptr<const std::vector<double>> grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    HistoryFunction history_;
    std::shared_ptr<const PolynomialDDE> model_;
    std::optional<double> blowup_time_;
};

class DivergenceError : public Error {
public:
    DivergenceError(double blowup_time, Trajectory partial);

    double blowup_time() const noexcept { return blowup_time_; }
    const Trajectory& partial() const noexcept { return partial_; }

private:
    double blowup_time_;
    Trajectory partial_;
};

struct IntegratorOptions {
    /// Requested step; the actual step divides the smallest positive delay.
    double target_step = 0.01;
    /// Derivative-jump points t = tau_i + tau_j + ... with up to this many terms
    /// are inserted into the grid.
    int breakpoint_depth = 3;
    double overflow_bound = 1e6;
    /// nullptr selects kernels::active().
    const kernels::KernelTable* kernels = nullptr;
};

/// Largest step <= target that divides the smallest positive delay.
double default_step(const PolynomialDDE& model, double target_step);

/// Integration nodes on [0, t_end]: the uniform grid plus breakpoints.
std::vector<double> integration_grid(const PolynomialDDE& model, double t_end,
                                     const IntegratorOptions& options = {});

/// Classical RK4 by the method of steps. Throws DivergenceError when the
/// overflow guard trips.
Trajectory integrate(const PolynomialDDE& model, const HistoryFunction& history, double t_end,
                     const IntegratorOptions& options = {});

/// Integrates several histories of one model in lock step, one SIMD lane per
/// history. Diverging lanes are returned truncated with blowup_time() set;
/// each lane is bit-identical to integrate() on its own history.
std::vector<Trajectory> integrate_batch(const PolynomialDDE& model,
                                        std::span<const HistoryFunction> histories, double t_end,
                                        const IntegratorOptions& options = {});

/// CSV with header `t,x` and one row per grid node, 17 significant digits.
void write_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace hopfavg
