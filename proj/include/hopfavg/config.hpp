#pragma once

// Experiment configuration files.
//
//   [linear]      a1, a2, tau1
//   [hopf]        tau2 = auto | <value>, rho_max = auto | <value>
//   [nonlinear]   tau<k> = <value>        named delays (tau1 and tau2 are predefined)
//                 a3 = <value>            adds -a3 x(t - tau3)
//                 a4 = <value>            adds  a4 x(t - tau3)^3
//                 term = c * x(tau3)^3 * x(0.5)   general monomial, repeatable
//                 embedding = tau3        delay of the x_delayed CSV column
//   [simulation]  epsilon = 0.1, 0.01
//                 history = exp:0.2, cos1:0.05, sin1:0.02, const:0.1
//                 t_end = auto | <value>, step = 0.01, window = 0.25
//
// `#` starts a comment. Lists are comma separated.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopfavg/dde.hpp"
#include "hopfavg/linear_analysis.hpp"

namespace hopfavg {

/// A delay given by name (tau1, tau2, tau3, ...) or by value.
struct DelayRef {
    std::string name;
    double value = 0.0;
};

struct TermSpec {
    double coefficient = 0.0;
    std::vector<std::pair<DelayRef, int>> factors;
};

struct ExperimentConfig {
    double a1 = 0.0;
    double a2 = 0.0;
    double tau1 = 0.0;
    std::optional<double> tau2;     // nullopt: the critical delay tau2_0
    std::optional<double> rho_max;  // nullopt: default_rho_max

    std::map<std::string, double> named_delays;  // from [nonlinear], excluding tau1/tau2
    std::vector<TermSpec> terms;
    std::optional<DelayRef> embedding;

    std::vector<double> epsilons{0.1};
    std::vector<HistoryFunction> histories;
    std::optional<double> t_end;
    double step = 0.01;
    double window = 0.25;

    std::string source;  // file name, for diagnostics

    TwoDelayLinear linear() const { return TwoDelayLinear(a1, a2, tau1); }

    /// Resolves named delays against tau2 (the value used for the linear part).
    double resolve(const DelayRef& ref, double tau2) const;

    /// x' = -a1 x(t - tau1) - a2 x(t - tau2) + eps * (nonlinear terms). Delay
    /// 0 is tau1, delay 1 is tau2, the rest are the other nonlinear delays in
    /// order of first use.
    PolynomialDDE build_model(double tau2, double epsilon) const;

    /// Delay of the phase-portrait column: `embedding`, else tau3, else the first
    /// nonlinear delay, else tau2.
    double embedding_delay(double tau2) const;
};

/// "exp:0.2", "cos1:0.05", "sin1:0.02", "const:0.1". Throws InvalidArgument.
HistoryFunction parse_history(const std::string& text);

/// Throws ConfigError with line and column.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<input>");
ExperimentConfig load_config(const std::string& path);

}  // namespace hopfavg
