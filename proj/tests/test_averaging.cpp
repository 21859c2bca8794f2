#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hopfavg/averaging.hpp"

using namespace hopfavg;

namespace {

struct Setup {
    HopfPoint hp;
    CenterBasis basis;
};

Setup setup() {
    const TwoDelayLinear m(2.0, 3.0, 0.113279);
    const HopfPoint hp = find_hopf_point(m);
    return {hp, normalize(hp, BilinearForm::from(m, hp)).basis};
}

// a4 x^3(t - tau3) - a3 x(t - tau3) on delays {tau1, tau2_0, tau3}.
ReducedNonlinearity cubic(const Setup& s, double a3, double a4, double tau3 = 1.2) {
    return ReducedNonlinearity({{a4, {{2, 3}}}, {-a3, {{2, 1}}}}, {0.113279, s.hp.tau2_0, tau3}, s.basis);
}

}  // namespace

TEST_CASE("amplitude field basics", "[averaging]") {
    const Setup s = setup();
    const auto rn = cubic(s, 1.0, 1.0);
    const double T = rn.period();
    CHECK(T == Catch::Approx(2.0 * std::numbers::pi / s.hp.omega_star));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xi_d(0.0, T), rho_d(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double xi = xi_d(rng), rho = rho_d(rng);
        CHECK(amplitude_field(rn, xi, 0.0) == 0.0);
        CHECK(amplitude_field(rn, xi + T, rho) == Catch::Approx(amplitude_field(rn, xi, rho)).margin(1e-12));
        // Hand expansion of a4 (-rho c)^3 - a3 (-rho c) with c = cos(w (xi - tau3)).
        const double w = s.hp.omega_star;
        const double c = std::cos(w * (xi - 1.2));
        const double f = -rho * rho * rho * c * c * c + rho * c;
        const double g = s.basis.beta1() * std::sin(w * xi) - s.basis.beta2() * std::cos(w * xi);
        CHECK(amplitude_field(rn, xi, rho) == Catch::Approx(g * f).margin(1e-13));
    }
}

TEST_CASE("quadrature matches the cubic closed form", "[averaging]") {
    const Setup s = setup();
    for (double a : {1.0, -1.0, 0.3}) {
        const AveragedModel am(cubic(s, a, 2.0 * a, 0.9));
        REQUIRE(am.cubic());
        CHECK(am(0.0) == 0.0);
        for (int i = 0; i <= 50; ++i) {
            const double rho = 3.0 * i / 50.0;
            CHECK(std::fabs(am(rho) - *am.closed_form(rho)) <= 1e-10);
        }
    }
}

TEST_CASE("pure quadratic nonlinearity averages to zero", "[averaging]") {
    const Setup s = setup();
    const ReducedNonlinearity rn({{1.0, {{2, 2}}}}, {0.113279, s.hp.tau2_0, 1.2}, s.basis);
    const AveragedModel am(rn);
    CHECK_FALSE(am.cubic());
    for (double rho : {0.5, 1.0, 3.0}) CHECK(std::fabs(am(rho)) <= 1e-14);
    CHECK(find_equilibria(am, 10.0).empty());
}

TEST_CASE("equilibria of the cubic family", "[averaging]") {
    const Setup s = setup();
    const double c = s.basis.delay_factor(1.2);
    for (double a : {1.0, -1.0}) {
        const AveragedModel am(cubic(s, a, a));
        const auto eq = find_equilibria(am, default_rho_max(am.reduced()));
        REQUIRE(eq.size() == 1);
        CHECK(std::fabs(eq[0].rho_star - std::sqrt(4.0 / 3.0)) <= 1e-10);
        CHECK(std::fabs(am(eq[0].rho_star)) <= 1e-10);
        CHECK(eq[0].derivative == Catch::Approx(a * c).epsilon(1e-12));
        // Finite-difference derivative of the quadrature agrees with the closed form.
        const double h = 1e-6;
        const double fd = (am(eq[0].rho_star + h) - am(eq[0].rho_star - h)) / (2.0 * h);
        CHECK(std::fabs(fd - eq[0].derivative) <= 1e-6);
        // Stability of rho* is opposite to that of rho = 0.
        CHECK((eq[0].derivative > 0.0) == (am.derivative(0.0) < 0.0));
        CHECK(eq[0].stability == (a * c < 0.0 ? Stability::stable : Stability::unstable));
    }
}

TEST_CASE("opposite-sign cubic coefficients give no positive equilibrium", "[averaging]") {
    const Setup s = setup();
    const AveragedModel am(cubic(s, 1.0, -1.0));
    CHECK(find_equilibria(am, 10.0).empty());
    CHECK(predict(am, {}).empty());
}

TEST_CASE("predictions carry amplitude, period and stability", "[averaging]") {
    const Setup s = setup();
    const AveragedModel am(cubic(s, -1.0, -1.0));
    const auto eq = find_equilibria(am, 10.0);
    const auto pr = predict(am, eq);
    REQUIRE(pr.size() == 1);
    CHECK(pr[0].rho_star == eq[0].rho_star);
    CHECK(pr[0].period == 2.0 * std::numbers::pi / s.hp.omega_star);
    CHECK(pr[0].stability == eq[0].stability);
    CHECK_FALSE(pr[0].validity_note.empty());

    std::vector<Equilibrium> degenerate{{1.0, 0.0, Stability::degenerate}};
    CHECK(predict(am, degenerate).empty());
}

TEST_CASE("limit of the averaged flow", "[averaging]") {
    const Setup s = setup();
    // delay_factor(1.2) < 0 for this basis: a3 = 1 makes rho = 0 unstable and rho* stable.
    REQUIRE(s.basis.delay_factor(1.2) < 0.0);
    const AveragedModel grow(cubic(s, 1.0, 1.0));
    const auto eq = find_equilibria(grow, 10.0);
    CHECK(averaged_limit(grow, eq, 0.1).kind == AveragedLimit::Kind::orbit);
    CHECK(averaged_limit(grow, eq, 0.1).rho == eq[0].rho_star);
    CHECK(averaged_limit(grow, eq, 3.0).kind == AveragedLimit::Kind::orbit);
    CHECK(averaged_limit(grow, eq, 0.0).kind == AveragedLimit::Kind::zero);

    const AveragedModel shrink(cubic(s, -1.0, -1.0));
    const auto eq2 = find_equilibria(shrink, 10.0);
    CHECK(averaged_limit(shrink, eq2, 0.1).kind == AveragedLimit::Kind::zero);
    CHECK(averaged_limit(shrink, eq2, 2.0).kind == AveragedLimit::Kind::unbounded);
}

TEST_CASE("default search bracket", "[averaging]") {
    const Setup s = setup();
    CHECK(default_rho_max(cubic(s, 1.0, 1.0)) == 10.0);
    CHECK(default_rho_max(cubic(s, 1.0, 4.0)) == Catch::Approx(20.0));
}
