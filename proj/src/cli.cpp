#include "hopfavg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hopfavg/averaging.hpp"
#include "hopfavg/center_basis.hpp"
#include "hopfavg/config.hpp"
#include "hopfavg/errors.hpp"
#include "hopfavg/harness.hpp"
#include "hopfavg/linear_analysis.hpp"
#include "hopfavg/report.hpp"

namespace hopfavg {
namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Globals {
    std::string out_dir = "out";
    long seed = 0;
    bool quiet = false;
};

struct LinearArgs {
    double a1 = 0.0, a2 = 0.0, tau1 = 0.0;
};

void add_linear(CLI::App* cmd, LinearArgs& a) {
    cmd->add_option("--a1", a.a1, "coefficient of x(t - tau1)")->required();
    cmd->add_option("--a2", a.a2, "coefficient of x(t - tau2)")->required();
    cmd->add_option("--tau1", a.tau1, "first delay")->required();
}

void write_hopf(KeyValueWriter& kv, const HopfPoint& hp, const HypothesisReport& h) {
    kv.write("omega_star", hp.omega_star);
    kv.write("tau2_0", hp.tau2_0);
    kv.write("branch", hp.branch == HopfBranch::plus ? "plus" : "minus");
    kv.write("omega_scaled", hp.omega_scaled);
    kv.write("r2_0", hp.r2_0);
    kv.write("transversality_re", h.transversality.real());
    kv.write("transversality_im", h.transversality.imag());
    kv.write("simple", h.simple);
    kv.write("roots_near_axis", h.roots_near_axis);
    kv.write("no_other_axis_roots", h.no_other_axis_roots);
    kv.write("unique_frequency", h.unique_frequency);
    kv.write("omega_condition_value", h.omega_condition_value);
    kv.write("in_Omega", h.in_omega);
    kv.write("h_residual", h.h_residual);
}

int cmd_hopf(const LinearArgs& a, std::ostream& out) {
    const TwoDelayLinear m(a.a1, a.a2, a.tau1);
    const HopfPoint hp = find_hopf_point(m);
    KeyValueWriter kv(out);
    write_hopf(kv, hp, verify_hypotheses(m, hp));
    return kPass;
}

int cmd_basis(const LinearArgs& a, std::optional<double> tau2, std::optional<double> tau3, std::ostream& out) {
    const TwoDelayLinear m(a.a1, a.a2, a.tau1);
    HopfPoint hp = find_hopf_point(m);
    if (tau2) hp.tau2_0 = *tau2;
    const Normalization n = normalize(hp, BilinearForm::from(m, hp));
    KeyValueWriter kv(out);
    kv.write("omega_star", hp.omega_star);
    kv.write("tau2_0", hp.tau2_0);
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
    if (tau3) {
        kv.write("tau3", *tau3);
        kv.write("delay_factor", n.basis.delay_factor(*tau3));
        kv.write("closed_form_delay_factor", n.closed_form.delay_factor(*tau3));
    }
    return kPass;
}

int cmd_average(const std::string& path, std::optional<double> rho_max, const Globals& g, std::ostream& out) {
    ExperimentConfig cfg = load_config(path);
    if (rho_max) cfg.rho_max = rho_max;
    PipelineOptions opts;
    opts.simulate = false;
    const PipelineReport report = run_pipeline(cfg, opts);
    const AveragedModel& am = *report.averaged;

    std::filesystem::create_directories(g.out_dir);
    const auto csv_path = std::filesystem::path(g.out_dir) / "F0.csv";
    std::ofstream csv(csv_path);
    csv << "rho,F0\n";
    constexpr int samples = 200;
    for (int i = 0; i <= samples; ++i) {
        const double rho = report.rho_max * i / samples;
        csv << format_precise(rho) << ',' << format_precise(am(rho)) << '\n';
    }

    KeyValueWriter kv(out);
    kv.write("omega_star", report.hopf.omega_star);
    kv.write("tau2_0", report.hopf.tau2_0);
    kv.write("cubic_family", am.cubic().has_value());
    if (am.cubic()) {
        kv.write("a3", am.cubic()->a3);
        kv.write("a4", am.cubic()->a4);
        kv.write("tau3", am.cubic()->tau3);
        kv.write("delay_factor", am.reduced().basis().delay_factor(am.cubic()->tau3));
    }
    kv.write("F0_slope_at_zero", am.derivative(0.0));
    kv.write("rho_max", report.rho_max);
    kv.write("samples_file", csv_path.string());
    kv.write("equilibria", report.equilibria.size());
    for (std::size_t i = 0; i < report.equilibria.size(); ++i) {
        const std::string p = "equilibrium." + std::to_string(i) + ".";
        kv.write(p + "rho_star", report.equilibria[i].rho_star);
        kv.write(p + "derivative", report.equilibria[i].derivative);
        kv.write(p + "stability", to_string(report.equilibria[i].stability));
    }
    kv.write("predictions", report.predictions.size());
    for (std::size_t i = 0; i < report.predictions.size(); ++i) {
        const std::string p = "prediction." + std::to_string(i) + ".";
        kv.write(p + "amplitude", report.predictions[i].rho_star);
        kv.write(p + "period", report.predictions[i].period);
        kv.write(p + "stability", to_string(report.predictions[i].stability));
        kv.write(p + "note", report.predictions[i].validity_note);
    }
    return kPass;
}

int cmd_simulate(const std::string& path, const std::vector<double>& epsilons, std::optional<double> t_end,
                 const Globals& g, std::ostream& out) {
    ExperimentConfig cfg = load_config(path);
    if (!epsilons.empty()) cfg.epsilons = epsilons;
    if (t_end) cfg.t_end = t_end;
    if (cfg.histories.empty()) throw ConfigError("[simulation] needs at least one history", 0, 0);
    const PipelineReport report = run_pipeline(cfg);

    std::filesystem::create_directories(g.out_dir);
    KeyValueWriter kv(out);
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const RunResult& r = report.runs[i];
        const std::string name = run_file_stem(i, r) + ".csv";
        std::ofstream csv(std::filesystem::path(g.out_dir) / name);
        write_csv(*r.trajectory, csv);
        const std::string p = "run." + std::to_string(i) + ".";
        kv.write(p + "file", name);
        kv.write(p + "history", r.history_label);
        kv.write(p + "epsilon", r.epsilon);
        kv.write(p + "t_end", r.t_end);
        kv.write(p + "nodes", r.trajectory->size());
        kv.write(p + "verdict", to_string(r.measured.verdict));
        kv.write(p + "amplitude", r.measured.amplitude);
        kv.write(p + "period", r.measured.period);
        kv.write(p + "max_abs", r.measured.max_abs);
        if (r.trajectory->blowup_time()) kv.write(p + "blowup_time", *r.trajectory->blowup_time());
    }
    return kPass;
}

int cmd_verify(const std::string& path, bool figure_only, const Globals& g, std::ostream& out) {
    const ExperimentConfig cfg = load_config(path);
    if (cfg.histories.empty()) throw ConfigError("[simulation] needs at least one history", 0, 0);
    const PipelineReport report = run_pipeline(cfg);
    const auto files = emit_figure_data(report, g.out_dir);
    if (figure_only) {
        KeyValueWriter kv(out);
        kv.write("out", g.out_dir);
        for (std::size_t i = 0; i < files.size(); ++i) kv.write("file." + std::to_string(i), files[i]);
        kv.write("result", report.passed() ? "pass" : "fail");
    } else {
        std::ostringstream text;
        write_report(report, text);
        std::ofstream(std::filesystem::path(g.out_dir) / "report.txt") << text.str();
        out << text.str();
    }
    return report.passed() ? kPass : kFail;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hopf bifurcation and averaging for two-delay scalar DDEs", "hopfavg"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out_dir, "output directory for data files")->capture_default_str();
    app.add_option("--seed", g.seed, "reserved; every algorithm is deterministic");
    app.add_flag("--quiet", g.quiet, "suppress the report on standard output");

    LinearArgs lin;
    auto* hopf = app.add_subcommand("hopf", "critical delay, frequency and Hopf hypotheses");
    add_linear(hopf, lin);

    auto* basis = app.add_subcommand("basis", "center-space basis and its normalization");
    add_linear(basis, lin);
    std::optional<double> tau2, tau3;
    basis->add_option("--tau2", tau2, "override the critical delay");
    basis->add_option("--tau3", tau3, "also print the delay factor at this delay");

    std::string model;
    std::optional<double> rho_max;
    auto* average = app.add_subcommand("average", "averaged amplitude equation, equilibria, predictions");
    average->add_option("--model,model", model, "config file")->required()->check(CLI::ExistingFile);
    average->add_option("--rho-max", rho_max, "equilibrium search bracket")->check(CLI::PositiveNumber);

    std::vector<double> epsilons;
    std::optional<double> t_end;
    auto* simulate = app.add_subcommand("simulate", "integrate every history and epsilon of a config");
    simulate->add_option("--model,model", model, "config file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--epsilon", epsilons, "override the epsilon list")->delimiter(',');
    simulate->add_option("--t-end", t_end, "override the horizon")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "full pipeline; exit 0 when every comparison passes");
    verify->add_option("--model,model", model, "config file")->required()->check(CLI::ExistingFile);

    auto* figure = app.add_subcommand("figure", "emit phase-portrait CSVs and a manifest");
    figure->add_option("--model,model", model, "config file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    std::ostringstream sink;
    std::ostream& report = g.quiet ? static_cast<std::ostream&>(sink) : out;
    try {
        if (*hopf) return cmd_hopf(lin, report);
        if (*basis) return cmd_basis(lin, tau2, tau3, report);
        if (*average) return cmd_average(model, rho_max, g, report);
        if (*simulate) return cmd_simulate(model, epsilons, t_end, g, report);
        if (*verify) return cmd_verify(model, false, g, report);
        if (*figure) return cmd_verify(model, true, g, report);
    } catch (const ConfigError& e) {
        err << "config error: " << (model.empty() ? "" : model + ": ") << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFail;
    }
    return kUsage;
}

}  // namespace hopfavg
