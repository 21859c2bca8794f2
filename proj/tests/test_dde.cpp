#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hopfavg/dde.hpp"

using namespace hopfavg;
using std::numbers::pi;

namespace {

// x' = -(pi/2) x(t - 1), exact solution cos(pi t / 2) from history cos(pi theta / 2).
PolynomialDDE analytic_model() { return PolynomialDDE({1.0}, {{-pi / 2.0, 0}}, 0.0, {}); }
HistoryFunction analytic_history() {
    return HistoryFunction::custom("cos(pi theta/2)", [](double th) { return std::cos(pi * th / 2.0); }, -1.0);
}

PolynomialDDE parkinson(double eps) {
    return PolynomialDDE({0.113279, 0.750157, 1.2}, {{-2.0, 0}, {-3.0, 1}}, eps,
                         {{-1.0, {{2, 3}}}, {1.0, {{2, 1}}}});
}

double max_error(const Trajectory& tr) {
    double err = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        err = std::max(err, std::fabs(tr.values()[i] - std::cos(pi * tr.times()[i] / 2.0)));
    }
    return err;
}

}  // namespace

TEST_CASE("model construction validates its inputs", "[dde]") {
    CHECK_THROWS_AS(PolynomialDDE({-1.0}, {{1.0, 0}}, 0.0, {}), InvalidArgument);
    CHECK_THROWS_AS(PolynomialDDE({1.0}, {{1.0, 3}}, 0.0, {}), InvalidArgument);
    CHECK_THROWS_AS(PolynomialDDE({1.0}, {{1.0, 0}}, -0.1, {}), InvalidArgument);
    CHECK_THROWS_AS(PolynomialDDE({1.0}, {}, 0.1, {{1.0, {{0, 0}}}}), InvalidArgument);
    const PolynomialDDE m = parkinson(0.1);
    CHECK(m.max_delay() == 1.2);
    CHECK(m.min_positive_delay() == 0.113279);
    CHECK(m.with_epsilon(0.5).epsilon() == 0.5);
}

TEST_CASE("right-hand side evaluation", "[dde]") {
    const PolynomialDDE m = parkinson(0.1);
    const double zero[3] = {0.0, 0.0, 0.0};
    CHECK(evaluate_rhs(m, zero) == 0.0);
    const double x[3] = {0.5, -0.25, 2.0};
    const double expect = -2.0 * 0.5 - 3.0 * -0.25 + 0.1 * (-8.0 + 2.0);
    CHECK(evaluate_rhs(m, x) == Catch::Approx(expect).epsilon(1e-15));
    CHECK(evaluate_rhs(m, 0.0, [](double s) { return s; }) ==
          Catch::Approx(-2.0 * -0.113279 - 3.0 * -0.750157 + 0.1 * (-std::pow(-1.2, 3) - 1.2)));
}

TEST_CASE("history functions and their domain", "[dde]") {
    const auto h = HistoryFunction::exponential(0.2);
    CHECK(h(0.0) == 0.2);
    CHECK(h(-1.0) == Catch::Approx(0.2 * std::exp(-1.0)));
    CHECK(HistoryFunction::shifted_cosine(0.05)(0.0) == Catch::Approx(0.1));
    CHECK(HistoryFunction::shifted_sine(0.02)(0.0) == Catch::Approx(0.02));
    CHECK_THROWS_AS(h(0.1), DomainError);
    const auto table = HistoryFunction::tabulated({-1.0, 0.0}, {1.0, 3.0});
    CHECK(table(-0.5) == Catch::Approx(2.0));
    CHECK_THROWS_AS(table(-1.5), DomainError);
    CHECK(h.label() == "exp:0.2");
}

TEST_CASE("integration grid divides the smallest delay and contains breakpoints", "[dde]") {
    const PolynomialDDE m = parkinson(0.0);
    const double h = default_step(m, 0.01);
    CHECK(h <= 0.01);
    CHECK(std::fabs(0.113279 / h - std::round(0.113279 / h)) < 1e-9);
    const auto grid = integration_grid(m, 5.0);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 5.0);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    for (double bp : {0.750157, 1.2, 0.750157 + 1.2, 0.113279 + 0.750157}) {
        CHECK(std::find(grid.begin(), grid.end(), bp) != grid.end());
    }
}

TEST_CASE("analytic delay equation is reproduced to 1e-8", "[dde]") {
    const Trajectory tr = integrate(analytic_model(), analytic_history(), 10.0);
    CHECK(max_error(tr) <= 1e-8);
    CHECK(tr.query(0.0) == analytic_history()(0.0));
    CHECK(tr.query(-1.0) == analytic_history()(-1.0));
    CHECK(tr.query(3.3333) == Catch::Approx(std::cos(pi * 3.3333 / 2.0)).margin(1e-8));
    CHECK_THROWS_AS(tr.query(10.5), DomainError);
    CHECK_THROWS_AS(tr.query(-1.5), DomainError);
}

TEST_CASE("observed order on the analytic problem is four", "[dde]") {
    IntegratorOptions coarse, fine;
    coarse.target_step = 0.1;
    fine.target_step = 0.05;
    const double e1 = max_error(integrate(analytic_model(), analytic_history(), 10.0, coarse));
    const double e2 = max_error(integrate(analytic_model(), analytic_history(), 10.0, fine));
    CHECK(std::log2(e1 / e2) == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("self-convergence on the cubic two-delay model", "[dde]") {
    // Reference at a quarter of the fine step; steps are chosen to divide every delay pair closely enough.
    const PolynomialDDE m = parkinson(0.001);
    const auto h = HistoryFunction::exponential(0.2);
    auto at20 = [&](double target) {
        IntegratorOptions o;
        o.target_step = target;
        return std::make_pair(integrate(m, h, 20.0, o).query(20.0), default_step(m, target));
    };
    const auto [x1, h1] = at20(0.04);
    const auto [x2, h2] = at20(0.02);
    const auto [xr, hr] = at20(0.005);
    (void)hr;
    const double order = std::log(std::fabs(x1 - xr) / std::fabs(x2 - xr)) / std::log(h1 / h2);
    CHECK(order == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("zero history stays exactly zero", "[dde]") {
    const Trajectory tr = integrate(parkinson(0.1), HistoryFunction::constant(0.0), 50.0);
    for (double x : tr.values()) REQUIRE(x == 0.0);
}

TEST_CASE("overflow guard raises DivergenceError", "[dde]") {
    // x' = 2 x(t) + 0 * x(t - 1) blows past 1e6 near t = ln(1e6)/2.
    PolynomialDDE m({0.0, 1.0}, {{2.0, 0}, {0.0, 1}}, 0.0, {});
    try {
        (void)integrate(m, HistoryFunction::constant(1.0), 20.0);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.blowup_time() == Catch::Approx(std::log(1e6) / 2.0).margin(0.05));
        CHECK(e.partial().diverged());
        CHECK(e.partial().t_end() < e.blowup_time());
    }
    const std::vector<HistoryFunction> hs{HistoryFunction::constant(1.0), HistoryFunction::constant(0.0)};
    const auto lanes = integrate_batch(m, hs, 20.0);
    CHECK(lanes[0].diverged());
    CHECK_FALSE(lanes[1].diverged());
    CHECK(lanes[1].t_end() == 20.0);
}

TEST_CASE("csv output has one row per node", "[dde]") {
    const Trajectory tr = integrate(analytic_model(), analytic_history(), 1.0);
    std::ostringstream out;
    write_csv(tr, out);
    const std::string text = out.str();
    CHECK(text.rfind("t,x\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == tr.size() + 1);
}
