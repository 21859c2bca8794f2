#include "hopfavg/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>

#include "hopfavg/errors.hpp"
#include "hopfavg/report.hpp"

namespace hopfavg {
namespace {

constexpr double kHorizonCap = 1e5;
constexpr double kPeriodTolerance = 0.05;

std::string run_key(std::size_t i, const char* field) { return "run." + std::to_string(i) + "." + field; }

}  // namespace

std::string run_file_stem(std::size_t i, const RunResult& r) {
    std::string label = r.history_label;
    for (char& c : label) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
    }
    char index[16];
    std::snprintf(index, sizeof index, "%02zu", i);
    return std::string("run") + index + "_eps" + format_number(r.epsilon) + "_" + label;
}

namespace {

void judge(RunResult& r, double period) {
    const OrbitMeasurement& m = r.measured;
    switch (r.expected) {
        case Expectation::zero:
            r.pass = m.verdict == OrbitVerdict::decayed_to_zero;
            r.reason = r.pass ? "decayed as predicted" : std::string("expected decay, measured ") + to_string(m.verdict);
            return;
        case Expectation::orbit: {
            if (m.verdict != OrbitVerdict::converged) {
                r.pass = false;
                r.reason = std::string("expected a periodic orbit, measured ") + to_string(m.verdict);
                return;
            }
            const double amp_err = std::fabs(m.amplitude - r.expected_amplitude) / r.expected_amplitude;
            const double per_err = std::fabs(m.period - period) / period;
            r.pass = amp_err <= r.amplitude_tolerance && per_err <= kPeriodTolerance;
            r.reason = "amplitude error " + format_number(amp_err) + ", period error " + format_number(per_err);
            return;
        }
        case Expectation::unbounded:
        case Expectation::linear_growth:
            r.pass = m.verdict == OrbitVerdict::diverged ||
                     (m.verdict != OrbitVerdict::decayed_to_zero && m.growth_rate > 0.0);
            r.reason = r.pass ? "grew as predicted" : "expected growth, envelope did not grow";
            return;
        case Expectation::linear_decay:
            r.pass = m.verdict == OrbitVerdict::decayed_to_zero ||
                     (m.verdict != OrbitVerdict::diverged && m.growth_rate < 0.0);
            r.reason = r.pass ? "decayed as predicted" : "expected decay, envelope did not decay";
            return;
        case Expectation::unchecked:
            r.pass = true;
            r.reason = "no prediction applies";
            return;
    }
}

}  // namespace

const char* to_string(Expectation e) {
    switch (e) {
        case Expectation::zero: return "zero";
        case Expectation::orbit: return "orbit";
        case Expectation::unbounded: return "unbounded";
        case Expectation::linear_decay: return "linear-decay";
        case Expectation::linear_growth: return "linear-growth";
        case Expectation::unchecked: return "unchecked";
    }
    return "?";
}

bool PipelineReport::passed() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.pass; });
}

double amplitude_tolerance(double epsilon) { return epsilon <= 0.01 ? 0.05 : 0.15; }

double default_horizon(const AveragedModel& am, const std::vector<Equilibrium>& equilibria, double epsilon) {
    const double period = am.reduced().period();
    if (epsilon == 0.0) return 50.0 * period;
    double d = 0.0;
    auto it = std::find_if(equilibria.begin(), equilibria.end(),
                           [](const Equilibrium& e) { return e.stability != Stability::degenerate; });
    d = it != equilibria.end() ? it->derivative : am.derivative(0.0);
    if (d == 0.0) return kHorizonCap;
    return std::min(40.0 / (epsilon * std::fabs(d)), kHorizonCap);
}

PipelineReport run_pipeline(const ExperimentConfig& cfg, const PipelineOptions& options) {
    PipelineReport report;
    report.config = cfg;
    const TwoDelayLinear linear = cfg.linear();
    report.hopf = find_hopf_point(linear);
    report.hypotheses = verify_hypotheses(linear, report.hopf);
    const BilinearForm bf = BilinearForm::from(linear, report.hopf);
    report.normalization = normalize(report.hopf, bf);
    const CenterBasis& basis = report.normalization->basis;

    report.tau2 = cfg.tau2.value_or(report.hopf.tau2_0);
    report.embedding_delay = cfg.embedding_delay(report.tau2);

    const PolynomialDDE base = cfg.build_model(report.tau2, 0.0);
    const ReducedNonlinearity rn = ReducedNonlinearity::from_model(base, basis);
    report.averaged.emplace(rn);
    const AveragedModel& am = *report.averaged;

    std::vector<PolarPoint> initial;
    double rho0_max = 0.0;
    for (const auto& h : cfg.histories) {
        const auto y = project(basis, bf, h);
        initial.push_back(polar_initial(y[0], y[1], report.hopf.omega_star));
        rho0_max = std::max(rho0_max, initial.back().rho);
    }
    // The bracket must reach past every initial amplitude for the limit of the
    // averaged flow to be decided correctly.
    report.rho_max = std::max(cfg.rho_max.value_or(default_rho_max(rn)), 2.0 * rho0_max);
    report.equilibria = find_equilibria(am, report.rho_max);
    report.predictions = predict(am, report.equilibria);

    if (!options.simulate || cfg.histories.empty()) return report;

    const double period = rn.period();
    const bool at_critical = report.tau2 == report.hopf.tau2_0;
    IntegratorOptions integ;
    integ.target_step = cfg.step;
    integ.kernels = options.kernels;

    std::vector<double> horizons;
    for (double eps : cfg.epsilons) {
        const double t_end = cfg.t_end.value_or(default_horizon(am, report.equilibria, eps));
        if (!(t_end > 10.0 * period)) {
            throw InvalidArgument("t_end = " + format_number(t_end) + " must exceed 10 periods (" +
                                  format_number(10.0 * period) + ") to measure an orbit");
        }
        horizons.push_back(t_end);
    }

    std::vector<std::future<std::vector<Trajectory>>> jobs;
    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
        jobs.push_back(std::async(std::launch::async, [&, e] {
            const PolynomialDDE model = cfg.build_model(report.tau2, cfg.epsilons[e]);
            return integrate_batch(model, cfg.histories, horizons[e], integ);
        }));
    }

    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
        std::vector<Trajectory> trajectories = jobs[e].get();
        const double eps = cfg.epsilons[e];
        for (std::size_t h = 0; h < cfg.histories.size(); ++h) {
            RunResult r;
            r.history_label = cfg.histories[h].label();
            r.epsilon = eps;
            r.t_end = horizons[e];
            r.initial = initial[h];
            r.amplitude_tolerance = amplitude_tolerance(eps);
            if (eps == 0.0) {
                r.expected = report.tau2 < report.hopf.tau2_0   ? Expectation::linear_decay
                             : report.tau2 > report.hopf.tau2_0 ? Expectation::linear_growth
                                                                : Expectation::unchecked;
            } else if (!at_critical) {
                r.expected = Expectation::unchecked;
            } else {
                const AveragedLimit lim = averaged_limit(am, report.equilibria, r.initial.rho);
                switch (lim.kind) {
                    case AveragedLimit::Kind::zero: r.expected = Expectation::zero; break;
                    case AveragedLimit::Kind::orbit:
                        r.expected = Expectation::orbit;
                        r.expected_amplitude = lim.rho;
                        break;
                    case AveragedLimit::Kind::unbounded: r.expected = Expectation::unbounded; break;
                }
            }
            r.measured = measure_orbit(trajectories[h], cfg.window);
            judge(r, period);
            r.trajectory.emplace(std::move(trajectories[h]));
            report.runs.push_back(std::move(r));
        }
    }
    return report;
}

void write_report(const PipelineReport& report, std::ostream& out) {
    KeyValueWriter kv(out);
    const ExperimentConfig& cfg = report.config;
    kv.write("config", cfg.source);
    kv.write("a1", cfg.a1);
    kv.write("a2", cfg.a2);
    kv.write("tau1", cfg.tau1);
    kv.write("omega_star", report.hopf.omega_star);
    kv.write("tau2_0", report.hopf.tau2_0);
    kv.write("tau2", report.tau2);
    kv.write("branch", report.hopf.branch == HopfBranch::plus ? "plus" : "minus");
    kv.write("transversality_re", report.hypotheses.transversality.real());
    kv.write("transversality_im", report.hypotheses.transversality.imag());
    kv.write("omega_condition_value", report.hypotheses.omega_condition_value);
    kv.write("in_Omega", report.hypotheses.in_omega);
    kv.write("h_residual", report.hypotheses.h_residual);
    kv.write("roots_near_axis", report.hypotheses.roots_near_axis);
    if (report.normalization) {
        const Normalization& n = *report.normalization;
        kv.write("alpha1", n.basis.alpha1());
        kv.write("beta1", n.basis.beta1());
        kv.write("alpha2", n.basis.alpha2());
        kv.write("beta2", n.basis.beta2());
        kv.write("gram_residual", n.residual);
        kv.write("closed_form_alpha1", n.closed_form.alpha1());
        kv.write("closed_form_beta1", n.closed_form.beta1());
        kv.write("closed_form_alpha2", n.closed_form.alpha2());
        kv.write("closed_form_beta2", n.closed_form.beta2());
        kv.write("closed_form_residual", n.closed_form_residual);
        kv.write("discrepancy", n.discrepancy);
        kv.write("embedding_delay", report.embedding_delay);
        kv.write("delay_factor", n.basis.delay_factor(report.embedding_delay));
        kv.write("closed_form_delay_factor", n.closed_form.delay_factor(report.embedding_delay));
    }
    if (report.averaged) {
        kv.write("cubic_family", report.averaged->cubic().has_value());
        kv.write("F0_slope_at_zero", report.averaged->derivative(0.0));
    }
    kv.write("rho_max", report.rho_max);
    kv.write("equilibria", report.equilibria.size());
    for (std::size_t i = 0; i < report.equilibria.size(); ++i) {
        const auto& e = report.equilibria[i];
        const std::string p = "equilibrium." + std::to_string(i) + ".";
        kv.write(p + "rho_star", e.rho_star);
        kv.write(p + "derivative", e.derivative);
        kv.write(p + "stability", to_string(e.stability));
    }
    kv.write("predictions", report.predictions.size());
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
        const auto& pr = report.predictions[i];
        const std::string p = "prediction." + std::to_string(i) + ".";
        kv.write(p + "amplitude", pr.rho_star);
        kv.write(p + "period", pr.period);
        kv.write(p + "stability", to_string(pr.stability));
        kv.write(p + "note", pr.validity_note);
    }
    kv.write("runs", report.runs.size());
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const RunResult& r = report.runs[i];
        kv.write(run_key(i, "history"), r.history_label);
        kv.write(run_key(i, "epsilon"), r.epsilon);
        kv.write(run_key(i, "t_end"), r.t_end);
        kv.write(run_key(i, "rho0"), r.initial.rho);
        kv.write(run_key(i, "xi0"), r.initial.xi);
        kv.write(run_key(i, "expected"), to_string(r.expected));
        if (r.expected == Expectation::orbit) {
            kv.write(run_key(i, "expected_amplitude"), r.expected_amplitude);
            kv.write(run_key(i, "amplitude_tolerance"), r.amplitude_tolerance);
        }
        kv.write(run_key(i, "verdict"), to_string(r.measured.verdict));
        kv.write(run_key(i, "amplitude"), r.measured.amplitude);
        kv.write(run_key(i, "period"), r.measured.period);
        kv.write(run_key(i, "drift"), r.measured.drift);
        kv.write(run_key(i, "growth_rate"), r.measured.growth_rate);
        kv.write(run_key(i, "max_abs"), r.measured.max_abs);
        if (r.trajectory && r.trajectory->blowup_time()) {
            kv.write(run_key(i, "blowup_time"), *r.trajectory->blowup_time());
        }
        kv.write(run_key(i, "pass"), r.pass);
        kv.write(run_key(i, "reason"), r.reason);
    }
    kv.write("result", report.passed() ? "pass" : "fail");
}

std::vector<std::string> emit_figure_data(const PipelineReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    std::ofstream manifest(dir / "manifest.txt");
    KeyValueWriter kv(manifest);
    kv.write("embedding_delay", report.embedding_delay);
    kv.write("columns", "t,x,x_delayed");
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
        const std::string p = "prediction." + std::to_string(i) + ".";
        kv.write(p + "amplitude", report.predictions[i].rho_star);
        kv.write(p + "period", report.predictions[i].period);
        kv.write(p + "stability", to_string(report.predictions[i].stability));
    }
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const RunResult& r = report.runs[i];
        if (!r.trajectory) continue;
        const Trajectory& traj = *r.trajectory;
        const std::string name = run_file_stem(i, r) + ".csv";
        std::ofstream csv(dir / name);
        csv << "t,x,x_delayed\n";
        const auto t = traj.times();
        const auto x = traj.values();
        for (std::size_t k = 0; k < t.size(); ++k) {
            csv << format_precise(t[k]) << ',' << format_precise(x[k]) << ','
                << format_precise(traj.query(t[k] - report.embedding_delay)) << '\n';
        }
        if (!csv) throw Error("failed writing " + (dir / name).string());
        written.push_back(name);
        kv.write(run_key(i, "file"), name);
        kv.write(run_key(i, "history"), r.history_label);
        kv.write(run_key(i, "epsilon"), r.epsilon);
        kv.write(run_key(i, "expected"), to_string(r.expected));
        kv.write(run_key(i, "verdict"), to_string(r.measured.verdict));
        kv.write(run_key(i, "amplitude"), r.measured.amplitude);
        kv.write(run_key(i, "period"), r.measured.period);
        kv.write(run_key(i, "pass"), r.pass);
    }
    if (!manifest) throw Error("failed writing " + (dir / "manifest.txt").string());
    written.push_back("manifest.txt");
    return written;
}

}  // namespace hopfavg
