#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hopfavg/errors.hpp"
#include "hopfavg/linear_analysis.hpp"

using namespace hopfavg;

namespace {
const TwoDelayLinear kModel(2.0, 3.0, 0.113279);
}

TEST_CASE("constructor rejects inadmissible coefficients", "[linear]") {
    CHECK_THROWS_AS(TwoDelayLinear(0.0, 3.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(TwoDelayLinear(2.0, -3.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(TwoDelayLinear(-3.0, 2.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(TwoDelayLinear(-2.0, 2.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(TwoDelayLinear(2.0, 3.0, 0.0), InvalidArgument);
}

TEST_CASE("scaling round trip", "[linear]") {
    for (double a1 : {2.0, -1.5}) {
        const TwoDelayLinear m(a1, 3.0, 0.2);
        const ScaledProblem p = scale(m);
        CHECK(p.a == Catch::Approx(3.0 / std::fabs(a1)));
        CHECK(p.r1 == Catch::Approx(0.2 * std::fabs(a1)));
        const TwoDelayLinear back = unscale(p, std::fabs(a1));
        CHECK(back.a1() == Catch::Approx(a1));
        CHECK(back.a2() == Catch::Approx(3.0));
        CHECK(back.tau1() == Catch::Approx(0.2));
    }
}

TEST_CASE("Hopf point of the worked example", "[linear]") {
    const HopfPoint hp = find_hopf_point(kModel);
    CHECK(hp.omega_star == Catch::Approx(3.0).margin(1e-3));
    CHECK(hp.tau2_0 == Catch::Approx(0.750157).margin(1e-4));
    CHECK(hp.branch == HopfBranch::plus);
    CHECK(hp.simple);
    CHECK(std::abs(characteristic_value(kModel, {0.0, hp.omega_star}, hp.tau2_0)) <= 1e-8);
    CHECK(std::abs(characteristic_value(kModel, {0.0, 3.0}, 0.750157)) <= 1e-3);
    CHECK(hp.transversality.real() > 0.0);
}

TEST_CASE("every candidate frequency solves the squared frequency equation", "[linear]") {
    const ScaledProblem p = scale(kModel);
    const auto omegas = candidate_frequencies(p);
    REQUIRE_FALSE(omegas.empty());
    for (double w : omegas) {
        CHECK(std::sin(w * p.r1) == Catch::Approx((w * w + 1.0 - p.a * p.a) / (2.0 * w)).margin(1e-10));
    }
    CHECK(std::is_sorted(omegas.begin(), omegas.end()));
}

TEST_CASE("root velocity matches a finite difference of the refined root", "[linear]") {
    const HopfPoint hp = find_hopf_point(kModel);
    const double d = 1e-6;
    const auto up = refine_root(kModel, hp.tau2_0 + d, {0.0, hp.omega_star});
    const auto down = refine_root(kModel, hp.tau2_0 - d, {0.0, hp.omega_star});
    const auto fd = (up - down) / (2.0 * d);
    CHECK(fd.real() == Catch::Approx(hp.transversality.real()).epsilon(1e-5));
    CHECK(fd.imag() == Catch::Approx(hp.transversality.imag()).epsilon(1e-5));
}

TEST_CASE("root counts change by two across the critical delay", "[linear]") {
    const HopfPoint hp = find_hopf_point(kModel);
    CHECK(count_roots_right_of(kModel, 0.9 * hp.tau2_0) == 0);
    CHECK(count_roots_right_of(kModel, 1.05 * hp.tau2_0) == 2);
    const HypothesisReport r = verify_hypotheses(kModel, hp);
    CHECK(r.roots_near_axis == 2);
    CHECK(r.no_other_axis_roots);
    CHECK(r.unique_frequency);
    CHECK(r.h_at_zero == 5.0);
    CHECK(r.omega_condition_value == Catch::Approx(hp.omega_star * hp.tau2_0));
}

TEST_CASE("negative-coefficient branch", "[linear]") {
    const TwoDelayLinear m(-1.0, 2.5, 0.3);
    const HopfPoint hp = find_hopf_point(m);
    CHECK(hp.branch == HopfBranch::minus);
    CHECK(std::abs(characteristic_value(m, {0.0, hp.omega_star}, hp.tau2_0)) <= 1e-8);
}

TEST_CASE("Omega set membership", "[linear]") {
    CHECK(in_omega_set(0.0));
    CHECK(in_omega_set(1.0));
    CHECK_FALSE(in_omega_set(2.0));
    CHECK(in_omega_set(2.0 * std::numbers::pi + 0.1));
    CHECK_FALSE(in_omega_set(-0.1));
}

TEST_CASE("no candidate frequency means no Hopf point", "[linear]") {
    CHECK_THROWS_AS(critical_delay(scale(kModel), {}, 2.0), NoHopfError);
}
