#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlpoisson/analysis.hpp"
#include "nlpoisson/geometry.hpp"
#include "nlpoisson/solver.hpp"

namespace nlpoisson {

enum class Command { CheckKernel, MassReport, Solve, Study, Eigen };

const char* command_name(Command command);
std::optional<Command> parse_command(std::string_view text);

/// Validated run description. Everything not given in the document takes the
/// documented default; optional members stay empty when absent.
struct RunConfig {
    std::optional<Command> command;
    std::string kernel = "quadratic";
    std::optional<std::string> problem;
    double mu = 1.0;
    std::optional<double> delta;
    std::vector<double> delta_list;
    double ratio = kMinCouplingRatio;
    Formulation formulation = Formulation::Eliminated;
    double tol = 1e-12;
    std::optional<int> max_iterations;
    Preconditioner preconditioner = Preconditioner::Diagonal;
    GradientMode gradient = GradientMode::Interpolant;
    std::optional<DomainKind> domain;
    std::optional<int> resolution;
    int eigen_count = 2;
    std::optional<std::string> output;

    bool operator==(const RunConfig&) const = default;

    SolveOptions solve_options() const;
    /// Domain implied by the explicit key or by the problem; interval otherwise.
    DomainKind domain_kind() const;
    /// The ladder for study/eigen: delta_list, or the built-in default for the domain.
    std::vector<double> ladder() const;
};

/// Ladders used when a study config gives no delta_list.
std::vector<double> default_ladder(DomainKind kind);

/// Strict `key = value` parser. `#` starts a comment; lists are written
/// `[a, b, c]`. Unknown or repeated keys and malformed values raise
/// Error(Config) with the line number.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

/// Checks the keys a given command needs (problem for solve/study, delta for
/// solve/mass-report, ...). Throws Error(Config) naming the key.
void require_for_command(const RunConfig& config, Command command);

}  // namespace nlpoisson
