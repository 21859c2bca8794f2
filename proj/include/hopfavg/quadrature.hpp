#pragma once

#include <functional>

#include "hopfavg/kernels.hpp"

namespace hopfavg {

struct SimpsonOptions {
    int initial_panels = 2048;  // even
    double tolerance = 1e-10;   // on successive doublings
    int max_panels = 1 << 20;
};

/// Composite Simpson on [lo, hi], doubling the panel count until two successive
/// estimates differ by less than the tolerance.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               const SimpsonOptions& options = {},
               const kernels::KernelTable& k = kernels::active());

/// Composite Simpson with a fixed, even number of panels.
double simpson_fixed(const std::function<double(double)>& f, double lo, double hi, int panels,
                     const kernels::KernelTable& k = kernels::active());

/// Mean of a periodic function over one period [start, start + period) by the
/// trapezoidal rule on `nodes` equispaced nodes.
double periodic_mean(const std::function<double(double)>& f, double start, double period, int nodes,
                     const kernels::KernelTable& k = kernels::active());

}  // namespace hopfavg
