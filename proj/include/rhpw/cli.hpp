#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rhpw/asymptotics.hpp"
#include "rhpw/rhp_oracle.hpp"

namespace rhpw {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode { exit_ok = 0, exit_config = 2, exit_validation = 3, exit_convergence = 4 };

struct RunConfig {
    std::string command;
    ParameterTriple triple;
    double tau = 0.5;
    double c0_fraction = 0.9;
    double c0 = 0.0;
    // Sample points; x comes either from the x list or from zeta * t.
    std::vector<double> zeta, x, t;
    TaperOptions taper;
    DOptions dquad;
    OracleOptions oracle;
    PsiConvention psi = PsiConvention::definition;
    double ux_step = 0.0;  // > 0 adds oracle u_x by finite differences
    std::vector<cplx> cross_q;
    int r_samples = 401;
    std::string mesh_cache;
    std::string resolved;  // pretty-printed JSON of every resolved value

    std::vector<std::pair<double, double>> points() const;  // (x, t), zeta-major
};

// Subcommands: validate, asymptotics, oracle, compare, cross-check.
RunConfig parse_config(const std::string& text, const std::string& command);

// Writes the artifacts of one subcommand into out_dir and a short log to
// `log`; returns an ExitCode.
int run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

// Least-squares slope of log(err / ln t) against log t, i.e. the exponent p
// in err ~ C t^p ln t.
double fit_log_rate(const std::vector<double>& t, const std::vector<double>& err);

}  // namespace rhpw
