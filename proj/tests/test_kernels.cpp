#include <catch_amalgamated.hpp>

#include <cstring>
#include <random>
#include <vector>

#include "hopfavg/dde.hpp"
#include "hopfavg/kernels.hpp"

using namespace hopfavg;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const kernels::KernelTable& simd_or_skip() {
    const kernels::KernelTable* t = kernels::avx2();
    if (!t) SKIP("AVX2 kernels unavailable on this machine");
    return *t;
}

}  // namespace

TEST_CASE("scalar weighted_sum matches a naive sum", "[kernels]") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
        const auto w = random_vector(rng, n);
        const auto v = random_vector(rng, n);
        double naive = 0.0;
        for (std::size_t i = 0; i < n; ++i) naive += w[i] * v[i];
        CHECK(kernels::scalar().weighted_sum(w, v) == Catch::Approx(naive).epsilon(1e-13).margin(1e-13));
    }
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference", "[kernels]") {
    const auto& simd = simd_or_skip();
    const auto& ref = kernels::scalar();
    std::mt19937_64 rng(11);
    for (std::size_t n = 0; n <= 37; ++n) {
        const auto a = random_vector(rng, n), b = random_vector(rng, n), c = random_vector(rng, n),
                   d = random_vector(rng, n);
        INFO("n = " << n);

        const double s_ref = ref.weighted_sum(a, b);
        const double s_simd = simd.weighted_sum(a, b);
        CHECK(std::memcmp(&s_ref, &s_simd, sizeof(double)) == 0);

        auto y1 = a, y2 = a;
        ref.axpy(y1, 0.37, b);
        simd.axpy(y2, 0.37, b);
        CHECK(same_bits(y1, y2));

        std::vector<double> o1(n), o2(n);
        ref.offset(o1, a, -1.25, b);
        simd.offset(o2, a, -1.25, b);
        CHECK(same_bits(o1, o2));

        y1 = a;
        y2 = a;
        ref.multiply(y1, b);
        simd.multiply(y2, b);
        CHECK(same_bits(y1, y2));

        const kernels::HermiteWeights hw{{0.3, -0.1, 0.7, 0.05}};
        ref.hermite(o1, hw, a, b, c, d);
        simd.hermite(o2, hw, a, b, c, d);
        CHECK(same_bits(o1, o2));

        ref.rk4_combine(o1, a, 0.01, b, c, d, a);
        simd.rk4_combine(o2, a, 0.01, b, c, d, a);
        CHECK(same_bits(o1, o2));
    }
}

TEST_CASE("exceeds flags large and non-finite entries in both variants", "[kernels]") {
    std::vector<double> x{0.0, 2.0, -2.0, 1.0, std::nan(""), INFINITY, -0.5, 1.5, 3.0};
    std::vector<unsigned char> expect{0, 1, 1, 0, 1, 1, 0, 1, 1};
    std::vector<unsigned char> flags(x.size());
    kernels::scalar().exceeds(flags, x, 1.0);
    CHECK(flags == expect);
    if (const auto* simd = kernels::avx2()) {
        std::fill(flags.begin(), flags.end(), 7);
        simd->exceeds(flags, x, 1.0);
        CHECK(flags == expect);
    }
}

TEST_CASE("batched lanes reproduce single-history integration bit for bit", "[kernels]") {
    // x' = -2 x(t - 0.113279) - 3 x(t - 0.750157) + eps (x^3(t - 1.2) + x(t - 1.2))
    PolynomialDDE model({0.113279, 0.750157, 1.2}, {{-2.0, 0}, {-3.0, 1}}, 0.1,
                        {{1.0, {{2, 3}}}, {1.0, {{2, 1}}}});
    std::vector<HistoryFunction> hs{HistoryFunction::exponential(0.2), HistoryFunction::shifted_cosine(0.05),
                                    HistoryFunction::shifted_sine(0.02), HistoryFunction::constant(0.3),
                                    HistoryFunction::exponential(0.7)};

    for (const kernels::KernelTable* table : {&kernels::scalar(), kernels::avx2()}) {
        if (!table) continue;
        INFO("kernels = " << table->name);
        IntegratorOptions opts;
        opts.kernels = table;
        const auto batch = integrate_batch(model, hs, 30.0, opts);
        REQUIRE(batch.size() == hs.size());
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const Trajectory single = integrate(model, hs[i], 30.0, opts);
            REQUIRE(single.size() == batch[i].size());
            CHECK(std::memcmp(single.values().data(), batch[i].values().data(),
                              single.size() * sizeof(double)) == 0);
        }
    }
}

TEST_CASE("scalar and AVX2 integrations agree bit for bit", "[kernels]") {
    const auto& simd = simd_or_skip();
    PolynomialDDE model({0.113279, 0.750157, 1.2}, {{-2.0, 0}, {-3.0, 1}}, 0.1,
                        {{-1.0, {{2, 3}}}, {1.0, {{2, 1}}}});
    std::vector<HistoryFunction> hs{HistoryFunction::exponential(0.2), HistoryFunction::shifted_cosine(0.05),
                                    HistoryFunction::shifted_sine(0.02)};
    IntegratorOptions a, b;
    a.kernels = &kernels::scalar();
    b.kernels = &simd;
    const auto ra = integrate_batch(model, hs, 50.0, a);
    const auto rb = integrate_batch(model, hs, 50.0, b);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CHECK(std::memcmp(ra[i].values().data(), rb[i].values().data(), ra[i].size() * sizeof(double)) == 0);
        CHECK(std::memcmp(ra[i].slopes().data(), rb[i].slopes().data(), ra[i].size() * sizeof(double)) == 0);
    }
}
