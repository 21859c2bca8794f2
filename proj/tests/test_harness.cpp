#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hopfavg/harness.hpp"

using namespace hopfavg;
using std::numbers::pi;

namespace {

ExperimentConfig example(const char* name) {
    return load_config(std::string(HOPFAVG_SOURCE_DIR "/examples/") + name);
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hopfavg_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("known sinusoid is measured exactly", "[harness]") {
    // x' = -3 x(t - pi/6) has the solution 1.2 sin(3t).
    const PolynomialDDE m({pi / 6.0}, {{-3.0, 0}}, 0.0, {});
    const auto h = HistoryFunction::custom("1.2 sin(3 theta)", [](double th) { return 1.2 * std::sin(3.0 * th); });
    IntegratorOptions o;
    o.target_step = 0.005;
    const OrbitMeasurement r = measure_orbit(integrate(m, h, 60.0, o), 0.5);
    CHECK(r.verdict == OrbitVerdict::converged);
    CHECK(r.amplitude == Catch::Approx(1.2).margin(1e-6));
    CHECK(r.period == Catch::Approx(2.0 * pi / 3.0).margin(1e-6));
    CHECK(r.crossings >= 3);
}

TEST_CASE("decayed and diverged trajectories", "[harness]") {
    const PolynomialDDE m({0.0, 1.0}, {{2.0, 0}, {0.0, 1}}, 0.0, {});
    const std::vector<HistoryFunction> hs{HistoryFunction::constant(1.0), HistoryFunction::constant(0.0)};
    const auto lanes = integrate_batch(m, hs, 20.0);
    CHECK(measure_orbit(lanes[0]).verdict == OrbitVerdict::diverged);
    CHECK(measure_orbit(lanes[1]).verdict == OrbitVerdict::decayed_to_zero);
    CHECK_THROWS_AS(measure_orbit(lanes[1], 0.0), InvalidArgument);
}

TEST_CASE("too few oscillations are inconclusive", "[harness]") {
    // Monotone decay x' = -x(t - 0.1) from a small constant stays positive.
    const PolynomialDDE m({0.1}, {{-0.1, 0}}, 0.0, {});
    const auto r = measure_orbit(integrate(m, HistoryFunction::constant(1.0), 10.0));
    CHECK(r.verdict == OrbitVerdict::inconclusive);
    CHECK(r.crossings == 0);
}

TEST_CASE("pipeline on the shipped configuration", "[harness]") {
    const PipelineReport report = run_pipeline(example("parkinson.cfg"));
    CHECK(report.hopf.omega_star == Catch::Approx(3.0).margin(1e-3));
    REQUIRE(report.predictions.size() == 1);
    CHECK(report.predictions[0].rho_star == Catch::Approx(std::sqrt(4.0 / 3.0)).margin(1e-10));
    CHECK(report.predictions[0].period == Catch::Approx(2.0 * pi / 3.0).margin(1e-6));
    // With the normalized basis rho* is unstable for a3 = a4 = -1 and small
    // histories decay.
    CHECK(report.predictions[0].stability == Stability::unstable);
    REQUIRE(report.runs.size() == 3);
    for (const auto& r : report.runs) {
        CHECK(r.initial.rho < report.predictions[0].rho_star);
        CHECK(r.expected == Expectation::zero);
        CHECK(r.measured.verdict == OrbitVerdict::decayed_to_zero);
        CHECK(r.pass);
    }
    CHECK(report.passed());
    CHECK(report.runs[0].t_end == Catch::Approx(40.0 / (0.1 * std::fabs(report.equilibria[0].derivative))));
}

TEST_CASE("mirrored configuration converges to the predicted orbit", "[harness]") {
    const PipelineReport report = run_pipeline(example("parkinson_fig2.cfg"));
    REQUIRE(report.predictions.size() == 1);
    CHECK(report.predictions[0].stability == Stability::stable);
    for (const auto& r : report.runs) {
        CHECK(r.expected == Expectation::orbit);
        CHECK(r.measured.verdict == OrbitVerdict::converged);
        CHECK(r.measured.amplitude == Catch::Approx(r.expected_amplitude).epsilon(0.15));
        CHECK(r.measured.period == Catch::Approx(report.predictions[0].period).epsilon(0.05));
        CHECK(r.pass);
    }
}

TEST_CASE("linear part below the critical delay decays", "[harness]") {
    ExperimentConfig cfg = example("parkinson.cfg");
    cfg.epsilons = {0.0};
    cfg.tau2 = 0.9 * 0.7501566276736188;
    const PipelineReport report = run_pipeline(cfg);
    for (const auto& r : report.runs) {
        CHECK(r.expected == Expectation::linear_decay);
        CHECK(r.measured.growth_rate < 0.0);
        CHECK(r.pass);
    }
}

TEST_CASE("horizon is long enough to measure", "[harness]") {
    ExperimentConfig cfg = example("parkinson.cfg");
    cfg.t_end = 5.0;
    CHECK_THROWS_AS(run_pipeline(cfg), InvalidArgument);
}

TEST_CASE("figure data files", "[harness]") {
    ExperimentConfig cfg = example("parkinson_fig2.cfg");
    cfg.t_end = 60.0;
    const PipelineReport report = run_pipeline(cfg);
    const auto dir = scratch("figure");
    const auto files = emit_figure_data(report, dir);
    REQUIRE(files.size() == 4);
    CHECK(files.back() == "manifest.txt");
    std::ifstream csv(dir / files[1]);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x,x_delayed");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == report.runs[1].trajectory->size());

    PipelineOptions no_sim;
    no_sim.simulate = false;
    const auto empty = emit_figure_data(run_pipeline(cfg, no_sim), scratch("empty"));
    CHECK(empty == std::vector<std::string>{"manifest.txt"});
}

TEST_CASE("reports are reproducible", "[harness]") {
    ExperimentConfig cfg = example("parkinson.cfg");
    cfg.t_end = 100.0;
    std::ostringstream a, b;
    write_report(run_pipeline(cfg), a);
    write_report(run_pipeline(cfg), b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("omega_star = ") != std::string::npos);
}
