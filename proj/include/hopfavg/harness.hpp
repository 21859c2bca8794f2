#pragma once

// End-to-end runs: Hopf point, center basis, averaged amplitude equation,
// predictions, then simulation of every (history, epsilon) pair compared
// against what the averaged flow predicts for that history.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hopfavg/averaging.hpp"
#include "hopfavg/center_basis.hpp"
#include "hopfavg/config.hpp"
#include "hopfavg/linear_analysis.hpp"
#include "hopfavg/measure.hpp"

namespace hopfavg {

enum class Expectation {
    zero,           // averaged flow carries rho0 to 0
    orbit,          // ... to a positive equilibrium
    unbounded,      // ... past every equilibrium
    linear_decay,   // eps = 0, tau2 < tau2_0
    linear_growth,  // eps = 0, tau2 > tau2_0
    unchecked,      // eps = 0 at tau2_0, or eps > 0 away from tau2_0
};

const char* to_string(Expectation e);

struct RunResult {
    std::string history_label;
    double epsilon = 0.0;
    double t_end = 0.0;
    PolarPoint initial;  // projection of the history onto the center space
    Expectation expected = Expectation::unchecked;
    double expected_amplitude = 0.0;
    double amplitude_tolerance = 0.0;
    OrbitMeasurement measured;
    bool pass = false;
    std::string reason;
    std::optional<Trajectory> trajectory;
};

struct PipelineReport {
    ExperimentConfig config;
    HopfPoint hopf;
    HypothesisReport hypotheses;
    std::optional<Normalization> normalization;
    double tau2 = 0.0;  // delay used in the simulations
    double embedding_delay = 0.0;
    double rho_max = 0.0;
    std::optional<AveragedModel> averaged;
    std::vector<Equilibrium> equilibria;
    std::vector<PeriodicPrediction> predictions;
    std::vector<RunResult> runs;

    bool passed() const;
};

struct PipelineOptions {
    const kernels::KernelTable* kernels = nullptr;
    bool simulate = true;
};

/// 40 / (eps |D|) capped at 1e5, with D the derivative at the first
/// non-degenerate equilibrium, else at rho = 0. eps = 0 gives 50 periods.
double default_horizon(const AveragedModel& am, const std::vector<Equilibrium>& equilibria, double epsilon);

/// Amplitude tolerance relative to rho*: 5% for eps <= 0.01, else 15%.
double amplitude_tolerance(double epsilon);

/// Throws NoHopfError, DegeneracyError or InvalidArgument from the stages.
PipelineReport run_pipeline(const ExperimentConfig& cfg, const PipelineOptions& options = {});

/// "run03_eps0.1_exp_0.2": file stem for run i.
std::string run_file_stem(std::size_t i, const RunResult& r);

/// Key-value report, deterministic given the config.
void write_report(const PipelineReport& report, std::ostream& out);

/// One `t,x,x_delayed` CSV per run plus manifest.txt. Returns the file names
/// written, manifest last.
std::vector<std::string> emit_figure_data(const PipelineReport& report, const std::filesystem::path& dir);

}  // namespace hopfavg
