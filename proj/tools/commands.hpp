#ifndef MLHP_TOOLS_COMMANDS_HPP
#define MLHP_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mlhp::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation_failure = 1,
    exit_config_error = 2,
    exit_numeric_error = 3,
    exit_degenerate_geometry = 4,
};

struct ValidationConfig
{
    int n_atoms = 3;
    double f = 4.0;
    double kappa_tilde = 2.0;
    double k_max = 1.0;
    int ode_steps = 2000;
    int segments = 10000;
    /// 1 except when deliberately corrupting the covariance flow.
    double ode_prefactor_scale = 1.0;
    std::uint64_t seed = 20240611;
};

struct CheckResult
{
    std::string name;
    bool passed;
    std::string detail;
};

/// Exact-oracle and protocol consistency checks behind `validate`.
std::vector<CheckResult> run_validation(const ValidationConfig& config);

/// Parses args (without the program name) and runs one command. Results go
/// to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mlhp::cli

#endif
