#pragma once

// Data-parallel inner loops used by quadrature and by the lane-batched
// integrator. Every entry has a scalar reference implementation; an AVX2
// variant is selected at runtime when the CPU supports it.
//
// Elementwise kernels evaluate each lane with the same sequence of IEEE
// operations in both variants, so their results are bit-identical. The
// reduction uses four interleaved accumulators in both variants for the same
// reason.

#include <cstddef>
#include <span>
#include <string_view>

namespace hopfavg::kernels {

/// Coefficients of a cubic Hermite interpolant evaluated at one abscissa:
/// value = w[0]*x0 + w[1]*d0 + w[2]*x1 + w[3]*d1 (slopes pre-scaled by step).
struct HermiteWeights {
    double w[4];
};

struct KernelTable {
    std::string_view name;

    /// sum_i w[i] * v[i]
    double (*weighted_sum)(std::span<const double> w, std::span<const double> v);

    /// y[i] += a * x[i]
    void (*axpy)(std::span<double> y, double a, std::span<const double> x);

    /// out[i] = x[i] + a * k[i]
    void (*offset)(std::span<double> out, std::span<const double> x, double a,
                   std::span<const double> k);

    /// y[i] *= x[i]
    void (*multiply)(std::span<double> y, std::span<const double> x);

    /// out[i] = w0*x0[i] + w1*d0[i] + w2*x1[i] + w3*d1[i]
    void (*hermite)(std::span<double> out, const HermiteWeights& w, std::span<const double> x0,
                    std::span<const double> d0, std::span<const double> x1,
                    std::span<const double> d1);

    /// out[i] = x[i] + (h/6) * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
    void (*rk4_combine)(std::span<double> out, std::span<const double> x, double h,
                        std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k4);

    /// Writes 1 to flags[i] where |x[i]| > bound or x[i] is not finite, else 0.
    void (*exceeds)(std::span<unsigned char> flags, std::span<const double> x, double bound);
};

const KernelTable& scalar();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2();

/// Table used by default: AVX2 when available unless the environment variable
/// HOPFAVG_KERNELS=scalar forces the reference path.
const KernelTable& active();

}  // namespace hopfavg::kernels
