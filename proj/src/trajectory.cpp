#include <algorithm>
#include <cmath>
#include <ostream>

#include "hopfavg/dde.hpp"
#include "hopfavg/report.hpp"

namespace hopfavg {

Trajectory::Trajectory(std::shared_ptr<const std::vector<double>> grid, std::vector<double> values,
                       std::vector<double> slopes, HistoryFunction history,
                       std::shared_ptr<const PolynomialDDE> model, std::optional<double> blowup_time)
    : grid_(std::move(grid)), values_(std::move(values)), slopes_(std::move(slopes)),
      history_(std::move(history)), model_(std::move(model)), blowup_time_(blowup_time) {
    if (!grid_ || !model_ || values_.empty() || values_.size() != slopes_.size() ||
        values_.size() > grid_->size()) {
        throw InvalidArgument("trajectory: inconsistent grid and node data");
    }
}

double Trajectory::query(double t) const {
    if (!(t >= t_min()) || !(t <= t_end())) {
        throw DomainError("trajectory query at t = " + format_number(t) + " outside [" +
                          format_number(t_min()) + ", " + format_number(t_end()) + "]");
    }
    if (t < 0.0) return history_(t);
    const auto nodes = times();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
    if (nodes[j] == t || j + 1 >= nodes.size()) return values_[j];
    const double h = nodes[j + 1] - nodes[j];
    const double s = (t - nodes[j]) / h;
    const double s2 = s * s;
    const double r = 1.0 - s;
    const double r2 = r * r;
    return (1.0 + 2.0 * s) * r2 * values_[j] + h * s * r2 * slopes_[j] +
           s2 * (3.0 - 2.0 * s) * values_[j + 1] + h * s2 * (s - 1.0) * slopes_[j + 1];
}

DivergenceError::DivergenceError(double blowup_time, Trajectory partial)
    : Error("integration diverged (overflow guard) at t = " + format_number(blowup_time)),
      blowup_time_(blowup_time), partial_(std::move(partial)) {}

void write_csv(const Trajectory& trajectory, std::ostream& out) {
    out << "t,x\n";
    const auto t = trajectory.times();
    const auto x = trajectory.values();
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << format_precise(t[i]) << ',' << format_precise(x[i]) << '\n';
    }
}

}  // namespace hopfavg
