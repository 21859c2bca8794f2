#include "hopfavg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hopfavg/errors.hpp"

namespace hopfavg {
namespace {

constexpr double kDecayed = 1e-6;
constexpr double kDriftLimit = 0.02;

double zero_crossing(const Trajectory& traj, double lo, double hi) {
    double f_lo = traj.query(lo);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = traj.query(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mean(const std::vector<double>& v, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += v[i];
    return s / static_cast<double>(e - b);
}

}  // namespace

const char* to_string(OrbitVerdict v) {
    switch (v) {
        case OrbitVerdict::converged: return "converged";
        case OrbitVerdict::decayed_to_zero: return "decayed-to-zero";
        case OrbitVerdict::diverged: return "diverged";
        case OrbitVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

OrbitMeasurement measure_orbit(const Trajectory& traj, double window) {
    if (!(window > 0.0) || window > 1.0) throw InvalidArgument("measurement window must lie in (0, 1]");
    OrbitMeasurement m;
    m.window_end = traj.t_end();
    m.window_start = traj.t_end() * (1.0 - window);
    if (traj.diverged()) {
        m.verdict = OrbitVerdict::diverged;
        m.max_abs = std::numeric_limits<double>::infinity();
        return m;
    }

    const auto t = traj.times();
    const auto x = traj.values();
    const auto dx = traj.slopes();
    std::size_t first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), m.window_start) - t.begin());

    std::vector<double> up, down, ext_t, ext_a;
    for (std::size_t i = first; i < t.size(); ++i) m.max_abs = std::max(m.max_abs, std::fabs(x[i]));
    for (std::size_t i = first; i + 1 < t.size(); ++i) {
        if (x[i] < 0.0 && x[i + 1] >= 0.0) up.push_back(zero_crossing(traj, t[i], t[i + 1]));
        else if (x[i] > 0.0 && x[i + 1] <= 0.0) down.push_back(zero_crossing(traj, t[i], t[i + 1]));
        if ((dx[i] > 0.0 && dx[i + 1] <= 0.0) || (dx[i] < 0.0 && dx[i + 1] >= 0.0)) {
            // Root of the linearly interpolated slope; the value error is second order.
            const double s = dx[i] / (dx[i] - dx[i + 1]);
            const double te = t[i] + s * (t[i + 1] - t[i]);
            ext_t.push_back(te);
            ext_a.push_back(std::fabs(traj.query(te)));
        }
    }
    m.crossings = up.size() + down.size();
    m.extrema = ext_t.size();

    if (m.max_abs < kDecayed) {
        m.verdict = OrbitVerdict::decayed_to_zero;
        return m;
    }

    double gap_sum = 0.0;
    std::size_t gaps = 0;
    for (const auto* c : {&up, &down}) {
        for (std::size_t i = 1; i < c->size(); ++i) {
            gap_sum += (*c)[i] - (*c)[i - 1];
            ++gaps;
        }
    }
    if (gaps > 0) m.period = gap_sum / static_cast<double>(gaps);

    if (!ext_a.empty()) {
        m.amplitude = mean(ext_a, 0, ext_a.size());
        if (ext_a.size() >= 2) {
            const std::size_t half = ext_a.size() / 2;
            const double early = mean(ext_a, 0, half);
            const double late = mean(ext_a, half, ext_a.size());
            m.drift = m.amplitude > 0.0 ? std::fabs(late - early) / m.amplitude : 0.0;

            double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < ext_a.size(); ++i) {
                if (!(ext_a[i] > 0.0)) continue;
                const double l = std::log(ext_a[i]);
                st += ext_t[i];
                sl += l;
                stt += ext_t[i] * ext_t[i];
                stl += ext_t[i] * l;
                ++n;
            }
            const double den = static_cast<double>(n) * stt - st * st;
            if (n >= 2 && den > 0.0) m.growth_rate = (static_cast<double>(n) * stl - st * sl) / den;
        }
    }

    if (m.crossings < 3) {
        m.verdict = OrbitVerdict::inconclusive;
    } else {
        m.verdict = m.drift < kDriftLimit ? OrbitVerdict::converged : OrbitVerdict::inconclusive;
    }
    return m;
}

}  // namespace hopfavg
