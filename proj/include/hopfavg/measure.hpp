#pragma once

#include <cstddef>

#include "hopfavg/dde.hpp"

namespace hopfavg {

enum class OrbitVerdict { converged, decayed_to_zero, diverged, inconclusive };

const char* to_string(OrbitVerdict v);

struct OrbitMeasurement {
    double amplitude = 0.0;  // mean |x| at extrema in the window
    double period = 0.0;     // mean gap between same-direction zero crossings
    OrbitVerdict verdict = OrbitVerdict::inconclusive;
    double drift = 0.0;        // |A_late - A_early| / A between the two halves of the window
    double growth_rate = 0.0;  // least-squares slope of log|x| at the extrema
    double max_abs = 0.0;      // max |x| over the window nodes
    std::size_t crossings = 0;
    std::size_t extrema = 0;
    double window_start = 0.0;
    double window_end = 0.0;
};

/// Measures the tail fraction `window` of [0, t_end]. Diverged trajectories
/// are reported as such without measuring.
OrbitMeasurement measure_orbit(const Trajectory& traj, double window = 0.25);

}  // namespace hopfavg
