#include <algorithm>
#include <cmath>
#include <limits>

#include "hopfavg/dde.hpp"
#include "hopfavg/report.hpp"

namespace hopfavg {
namespace {

constexpr std::size_t kNotDiverged = std::numeric_limits<std::size_t>::max();

void collect_breakpoints(const std::vector<double>& delays, std::size_t start, int depth, double sum,
                         double t_end, std::vector<double>& out) {
    if (depth == 0) return;
    for (std::size_t i = start; i < delays.size(); ++i) {
        const double next = sum + delays[i];
        if (next >= t_end) continue;
        out.push_back(next);
        collect_breakpoints(delays, i, depth - 1, next, t_end, out);
    }
}

// Lane-batched method of steps. Node data is stored node-major so the lanes of
// one node are contiguous and every kernel call covers all histories at once.
class BatchStepper {
public:
    BatchStepper(const PolynomialDDE& model, std::span<const HistoryFunction> histories,
                 const std::vector<double>& grid, const kernels::KernelTable& k)
        : model_(model), histories_(histories), grid_(grid), k_(k), lanes_(histories.size()),
          values_(grid.size() * lanes_), slopes_(grid.size() * lanes_),
          cursor_(model.delays().size(), 0), used_(model.delays().size(), false),
          gathered_(model.delays().size() * lanes_), stage_(lanes_), nl_(lanes_), prod_(lanes_) {
        for (const auto& t : model.linear_terms()) used_[t.delay_index] = true;
        for (const auto& m : model.nonlinear_terms()) {
            for (const auto& f : m.factors) used_[f.delay_index] = true;
        }
        for (auto& kk : stage_k_) kk.resize(lanes_);
    }

    // Runs the whole grid; returns the number of nodes computed.
    std::size_t run(double overflow_bound, std::vector<std::size_t>& diverged_at) {
        const std::size_t n_nodes = grid_.size();
        for (std::size_t l = 0; l < lanes_; ++l) values_[l] = histories_[l](0.0);
        rhs(grid_[0], 0, node(values_, 0), node(slopes_, 0));

        std::vector<unsigned char> flags(lanes_);
        std::size_t remaining = lanes_;
        for (std::size_t n = 0; n + 1 < n_nodes; ++n) {
            const double t = grid_[n];
            const double t_next = grid_[n + 1];
            const double dt = t_next - t;
            const double t_half = t + 0.5 * dt;
            const auto x = cnode(values_, n);
            const auto k1 = cnode(slopes_, n);

            k_.offset(stage_, x, 0.5 * dt, k1);
            rhs(t_half, n, stage_, stage_k_[0]);
            k_.offset(stage_, x, 0.5 * dt, stage_k_[0]);
            rhs(t_half, n, stage_, stage_k_[1]);
            k_.offset(stage_, x, dt, stage_k_[1]);
            rhs(t_next, n, stage_, stage_k_[2]);

            const auto x_next = node(values_, n + 1);
            k_.rk4_combine(x_next, x, dt, k1, stage_k_[0], stage_k_[1], stage_k_[2]);

            k_.exceeds(flags, x_next, overflow_bound);
            for (std::size_t l = 0; l < lanes_; ++l) {
                if (flags[l] != 0 && diverged_at[l] == kNotDiverged) {
                    diverged_at[l] = n + 1;
                    --remaining;
                }
            }
            if (remaining == 0) return n + 2;

            rhs(t_next, n, x_next, node(slopes_, n + 1));
        }
        return n_nodes;
    }

    std::vector<double> lane_values(std::size_t lane, std::size_t count) const {
        return strided(values_, lane, count);
    }
    std::vector<double> lane_slopes(std::size_t lane, std::size_t count) const {
        return strided(slopes_, lane, count);
    }

private:
    std::span<double> node(std::vector<double>& data, std::size_t n) {
        return {data.data() + n * lanes_, lanes_};
    }
    std::span<const double> cnode(const std::vector<double>& data, std::size_t n) const {
        return {data.data() + n * lanes_, lanes_};
    }

    std::vector<double> strided(const std::vector<double>& data, std::size_t lane, std::size_t count) const {
        std::vector<double> out(count);
        for (std::size_t n = 0; n < count; ++n) out[n] = data[n * lanes_ + lane];
        return out;
    }

    // x(s) for every lane into `out`. Nodes up to `known` carry values and slopes;
    // `state` is the current stage value used for zero delays.
    void lookup(std::size_t delay_index, double s, std::size_t known, std::span<const double> state,
                std::span<double> out) {
        if (model_.delays()[delay_index] == 0.0) {
            std::copy(state.begin(), state.end(), out.begin());
            return;
        }
        if (s < 0.0) {
            for (std::size_t l = 0; l < lanes_; ++l) out[l] = histories_[l](s);
            return;
        }
        std::size_t& j = cursor_[delay_index];
        while (j + 1 <= known && grid_[j + 1] <= s) ++j;
        if (grid_[j] == s || j == known) {
            if (j == known && s - grid_[j] > 1e-9 * (grid_[j] + 1.0)) {
                throw DomainError("delayed lookup at t = " + format_number(s) + " ahead of the integrated solution");
            }
            const auto v = cnode(values_, j);
            std::copy(v.begin(), v.end(), out.begin());
            return;
        }
        const double h = grid_[j + 1] - grid_[j];
        const double u = (s - grid_[j]) / h;
        const double u2 = u * u;
        const double r = 1.0 - u;
        const double r2 = r * r;
        const kernels::HermiteWeights w{{(1.0 + 2.0 * u) * r2, h * u * r2, u2 * (3.0 - 2.0 * u),
                                         h * u2 * (u - 1.0)}};
        k_.hermite(out, w, cnode(values_, j), cnode(slopes_, j), cnode(values_, j + 1),
                   cnode(slopes_, j + 1));
    }

    void rhs(double t, std::size_t known, std::span<const double> state, std::span<double> out) {
        const auto& delays = model_.delays();
        for (std::size_t i = 0; i < delays.size(); ++i) {
            if (used_[i]) lookup(i, t - delays[i], known, state, delayed(i));
        }
        std::fill(out.begin(), out.end(), 0.0);
        for (const auto& term : model_.linear_terms()) k_.axpy(out, term.coefficient, delayed(term.delay_index));
        if (model_.nonlinear_terms().empty()) return;
        std::fill(nl_.begin(), nl_.end(), 0.0);
        for (const auto& m : model_.nonlinear_terms()) {
            std::fill(prod_.begin(), prod_.end(), m.coefficient);
            for (const auto& f : m.factors) {
                for (int p = 0; p < f.power; ++p) k_.multiply(prod_, delayed(f.delay_index));
            }
            k_.axpy(nl_, 1.0, prod_);
        }
        k_.axpy(out, model_.epsilon(), nl_);
    }

    std::span<double> delayed(std::size_t i) { return {gathered_.data() + i * lanes_, lanes_}; }

    const PolynomialDDE& model_;
    std::span<const HistoryFunction> histories_;
    const std::vector<double>& grid_;
    const kernels::KernelTable& k_;
    std::size_t lanes_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    std::vector<std::size_t> cursor_;
    std::vector<bool> used_;
    std::vector<double> gathered_;
    std::vector<double> stage_;
    std::vector<double> stage_k_[3];
    std::vector<double> nl_;
    std::vector<double> prod_;
};

}  // namespace

double default_step(const PolynomialDDE& model, double target_step) {
    if (!(target_step > 0.0) || !std::isfinite(target_step)) {
        throw InvalidArgument("target step must be positive and finite");
    }
    const double d_min = model.min_positive_delay();
    if (!std::isfinite(d_min)) return target_step;
    const double pieces = std::max(1.0, std::ceil(d_min / target_step * (1.0 - 1e-12)));
    return d_min / pieces;
}

std::vector<double> integration_grid(const PolynomialDDE& model, double t_end,
                                     const IntegratorOptions& options) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be positive and finite");
    const double h = default_step(model, options.target_step);
    const double snap = 1e-9 * h;

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(t_end / h) + 2);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * h;
        if (t >= t_end - snap) break;
        grid.push_back(t);
    }
    grid.push_back(t_end);

    std::vector<double> positive;
    for (double d : model.delays()) {
        if (d > 0.0) positive.push_back(d);
    }
    std::sort(positive.begin(), positive.end());
    positive.erase(std::unique(positive.begin(), positive.end()), positive.end());

    std::vector<double> breakpoints;
    collect_breakpoints(positive, 0, options.breakpoint_depth, 0.0, t_end, breakpoints);
    std::sort(breakpoints.begin(), breakpoints.end());

    std::vector<double> merged;
    merged.reserve(grid.size() + breakpoints.size());
    std::size_t b = 0;
    for (double node : grid) {
        while (b < breakpoints.size() && breakpoints[b] < node - snap) {
            if (merged.empty() || breakpoints[b] - merged.back() > snap) merged.push_back(breakpoints[b]);
            ++b;
        }
        while (b < breakpoints.size() && std::fabs(breakpoints[b] - node) <= snap) ++b;
        if (!merged.empty() && node - merged.back() <= snap) merged.back() = node;
        else merged.push_back(node);
    }
    return merged;
}

std::vector<Trajectory> integrate_batch(const PolynomialDDE& model, std::span<const HistoryFunction> histories,
                                        double t_end, const IntegratorOptions& options) {
    if (histories.empty()) return {};
    for (const auto& h : histories) {
        if (h.lower_bound() > -model.max_delay()) {
            throw InvalidArgument("history " + h.label() + " does not cover [-max_delay, 0]");
        }
    }
    const kernels::KernelTable& k = options.kernels != nullptr ? *options.kernels : kernels::active();
    auto grid = std::make_shared<const std::vector<double>>(integration_grid(model, t_end, options));
    auto shared_model = std::make_shared<const PolynomialDDE>(model);

    BatchStepper stepper(model, histories, *grid, k);
    std::vector<std::size_t> diverged_at(histories.size(), kNotDiverged);
    const std::size_t computed = stepper.run(options.overflow_bound, diverged_at);

    std::vector<Trajectory> out;
    out.reserve(histories.size());
    for (std::size_t l = 0; l < histories.size(); ++l) {
        std::optional<double> blowup;
        std::size_t count = computed;
        if (diverged_at[l] != kNotDiverged) {
            blowup = (*grid)[diverged_at[l]];
            count = diverged_at[l];
        }
        out.emplace_back(grid, stepper.lane_values(l, count), stepper.lane_slopes(l, count), histories[l],
                         shared_model, blowup);
    }
    return out;
}

Trajectory integrate(const PolynomialDDE& model, const HistoryFunction& history, double t_end,
                     const IntegratorOptions& options) {
    auto lanes = integrate_batch(model, std::span<const HistoryFunction>(&history, 1), t_end, options);
    Trajectory result = std::move(lanes.front());
    if (result.diverged()) {
        const double when = *result.blowup_time();
        throw DivergenceError(when, std::move(result));
    }
    return result;
}

}  // namespace hopfavg
