#include "hopfavg/kernels.hpp"

#if defined(HOPFAVG_BUILD_AVX2)

#include <immintrin.h>

#include <cmath>

namespace hopfavg::kernels::detail {
namespace {

double weighted_sum(std::span<const double> w, std::span<const double> v) {
    const std::size_t n = w.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(v.data() + i));
        acc = _mm256_add_pd(acc, prod);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
    for (; i < n; ++i) total += w[i] * v[i];
    return total;
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
    const std::size_t n = y.size();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y.data() + i),
                                        _mm256_mul_pd(va, _mm256_loadu_pd(x.data() + i)));
        _mm256_storeu_pd(y.data() + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void offset(std::span<double> out, std::span<const double> x, double a, std::span<const double> k) {
    const std::size_t n = out.size();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(x.data() + i),
                                        _mm256_mul_pd(va, _mm256_loadu_pd(k.data() + i)));
        _mm256_storeu_pd(out.data() + i, r);
    }
    for (; i < n; ++i) out[i] = x[i] + a * k[i];
}

void multiply(std::span<double> y, std::span<const double> x) {
    const std::size_t n = y.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y.data() + i,
                         _mm256_mul_pd(_mm256_loadu_pd(y.data() + i), _mm256_loadu_pd(x.data() + i)));
    }
    for (; i < n; ++i) y[i] *= x[i];
}

void hermite(std::span<double> out, const HermiteWeights& w, std::span<const double> x0,
             std::span<const double> d0, std::span<const double> x1, std::span<const double> d1) {
    const std::size_t n = out.size();
    const __m256d w0 = _mm256_set1_pd(w.w[0]);
    const __m256d w1 = _mm256_set1_pd(w.w[1]);
    const __m256d w2 = _mm256_set1_pd(w.w[2]);
    const __m256d w3 = _mm256_set1_pd(w.w[3]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_add_pd(_mm256_mul_pd(w0, _mm256_loadu_pd(x0.data() + i)),
                                  _mm256_mul_pd(w1, _mm256_loadu_pd(d0.data() + i)));
        r = _mm256_add_pd(r, _mm256_mul_pd(w2, _mm256_loadu_pd(x1.data() + i)));
        r = _mm256_add_pd(r, _mm256_mul_pd(w3, _mm256_loadu_pd(d1.data() + i)));
        _mm256_storeu_pd(out.data() + i, r);
    }
    for (; i < n; ++i) {
        out[i] = ((w.w[0] * x0[i] + w.w[1] * d0[i]) + w.w[2] * x1[i]) + w.w[3] * d1[i];
    }
}

void rk4_combine(std::span<double> out, std::span<const double> x, double h,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4) {
    const std::size_t n = out.size();
    const double s = h / 6.0;
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d sum = _mm256_add_pd(_mm256_loadu_pd(k1.data() + i),
                                    _mm256_mul_pd(two, _mm256_loadu_pd(k2.data() + i)));
        sum = _mm256_add_pd(sum, _mm256_mul_pd(two, _mm256_loadu_pd(k3.data() + i)));
        sum = _mm256_add_pd(sum, _mm256_loadu_pd(k4.data() + i));
        _mm256_storeu_pd(out.data() + i,
                         _mm256_add_pd(_mm256_loadu_pd(x.data() + i), _mm256_mul_pd(vs, sum)));
    }
    for (; i < n; ++i) {
        const double sum = ((k1[i] + 2.0 * k2[i]) + 2.0 * k3[i]) + k4[i];
        out[i] = x[i] + s * sum;
    }
}

void exceeds(std::span<unsigned char> flags, std::span<const double> x, double bound) {
    const std::size_t n = x.size();
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d vb = _mm256_set1_pd(bound);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mag = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x.data() + i));
        // Ordered <= is false for NaN, so NaN lanes are flagged like overflow.
        const int within = _mm256_movemask_pd(_mm256_cmp_pd(mag, vb, _CMP_LE_OQ));
        for (int l = 0; l < 4; ++l) flags[i + l] = (within >> l) & 1 ? 0 : 1;
    }
    for (; i < n; ++i) flags[i] = std::fabs(x[i]) <= bound ? 0 : 1;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{
        "avx2", weighted_sum, axpy, offset, multiply, hermite, rk4_combine, exceeds,
    };
    return table;
}

}  // namespace hopfavg::kernels::detail

#endif
