#include "nlpoisson/cli.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <system_error>

#include "nlpoisson/analysis.hpp"
#include "nlpoisson/assembly.hpp"
#include "nlpoisson/error.hpp"
#include "nlpoisson/report.hpp"

namespace nlpoisson {

namespace {

namespace fs = std::filesystem;

struct Checks {
    std::ostream& err;
    int failures = 0;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures;
        err << "ERROR " << code_name(ErrorCode::Invariant) << ' ' << what << '\n';
    }
    int status() const { return failures == 0 ? 0 : 1; }
};

int run_check_kernel(const RunConfig& config, std::ostream& log, Checks& checks) {
    const auto profile = profile_by_name(config.kernel);
    const auto report = verify_assumptions(profile);
    log << "kernel " << profile.name() << ": " << report.samples << " samples, ";
    if (report.ok()) {
        log << "no violations\n";
    } else {
        log << report.violations.size() << " violations\n";
        for (const auto& v : report.violations) {
            log << "  " << violation_name(v.kind) << " (" << ladder_name(v.ladder) << ") at r="
                << format_number(v.r) << " value=" << format_number(v.value) << '\n';
        }
    }
    for (int n = 1; n <= 3; ++n) {
        log << "alpha_" << n << " = " << format_number(normalization_constant(profile, n)) << '\n';
    }
    checks.expect(report.ok(), "kernel profile '" + profile.name() + "' violates its assumptions");
    return checks.status();
}

int run_mass_report(const RunConfig& config, const fs::path& out_dir, std::ostream& log, Checks& checks) {
    const auto kind = config.domain_kind();
    const double delta = *config.delta;
    const int resolution = config.resolution.value_or(resolution_for(kind, delta, config.ratio));
    const auto domain = make_domain(kind, resolution);
    const RescaledKernel kernel(std::make_shared<const KernelProfile>(profile_by_name(config.kernel)),
                                domain.dimension, delta);
    const auto report = kernel_mass_report(domain, kernel);
    write_file(out_dir / "mass_report.csv",
               [&](std::ostream& out) { write_mass_report_csv(out, domain, report); });
    log << "mass report: " << domain_kind_name(kind) << " resolution " << resolution << ", delta "
        << format_number(delta) << ", " << report.rows.size() << " nodes, " << report.violations()
        << " violations\n";
    checks.expect(report.violations() == 0,
                  std::to_string(report.violations()) + " nodes violate the kernel mass bounds");
    return checks.status();
}

int run_solve(const RunConfig& config, const fs::path& out_dir, std::ostream& log, Checks& checks) {
    const auto problem = builtin_problem(*config.problem, config.mu);
    const double delta = *config.delta;
    const int resolution = config.resolution.value_or(resolution_for(problem.domain, delta, config.ratio));
    const auto start = std::chrono::steady_clock::now();
    const auto domain = make_domain(problem.domain, resolution);
    const RescaledKernel kernel(std::make_shared<const KernelProfile>(profile_by_name(config.kernel)),
                                domain.dimension, delta);
    ModelParams params;
    params.delta = delta;
    params.boundary = problem.boundary;
    params.formulation = config.formulation;
    params.min_coupling_ratio = config.ratio;
    const auto system = assemble(domain, kernel, params, problem);
    const auto opts = config.solve_options();
    const Solution sol = config.formulation == Formulation::Coupled ? solve_coupled(system, opts)
                                                                    : solve_spd(system, opts);

    StudyRow row;
    row.delta = delta;
    row.h = domain.mesh_size_h;
    row.n_interior = domain.n_interior();
    row.n_boundary = domain.n_boundary();
    row.errors = error_norms(sol, problem, domain, kernel, params, config.gradient);
    row.iterations = sol.iterations;
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ConvergenceReport report;
    report.problem = problem.name;
    report.kernel = config.kernel;
    report.rows.push_back(row);

    write_file(out_dir / "solution.csv", [&](std::ostream& out) { write_solution_csv(out, domain, sol.u); });
    write_file(out_dir / "flux.csv", [&](std::ostream& out) { write_flux_csv(out, domain, sol.v); });
    write_file(out_dir / "report.csv", [&](std::ostream& out) { write_report_csv(out, report, false); });

    log << "solve " << problem.name << " (" << formulation_name(config.formulation) << "): delta "
        << format_number(delta) << ", h " << format_number(domain.mesh_size_h) << ", " << domain.n_interior()
        << " interior + " << domain.n_boundary() << " boundary nodes, " << sol.iterations << " iterations\n";
    log << "  l2 " << format_number(row.errors.l2_interior) << ", h1 " << format_number(row.errors.h1_interior)
        << ", flux " << format_number(row.errors.l2_flux) << '\n';

    const double target = opts.relative_residual_tol * sol.initial_residual;
    checks.expect(config.formulation == Formulation::Coupled || sol.final_residual <= target,
                  "final residual above the requested tolerance");
    checks.expect(sol.u.allFinite() && sol.v.allFinite(), "solution contains non-finite values");
    return checks.status();
}

int run_study(const RunConfig& config, const fs::path& out_dir, std::ostream& log, Checks& checks) {
    const auto problem = builtin_problem(*config.problem, config.mu);
    StudyOptions options;
    options.ratio = config.ratio;
    options.formulation = config.formulation;
    options.solve = config.solve_options();
    options.gradient = config.gradient;
    const auto report = convergence_study(problem, config.ladder(), config.kernel, options);

    write_file(out_dir / "report.csv", [&](std::ostream& out) { write_report_csv(out, report); });
    write_file(out_dir / "report.gp", [&](std::ostream& out) { write_report_gp(out, report, "report.csv"); });

    log << "study " << problem.name << " with " << report.rows.size() << " rows\n";
    for (const auto& r : report.rows) {
        log << "  delta " << format_number(r.delta) << ": h1 " << format_number(r.errors.h1_interior)
            << ", flux " << format_number(r.errors.l2_flux) << '\n';
        checks.expect(std::isfinite(r.errors.h1_interior) && std::isfinite(r.errors.l2_flux),
                      "non-finite error norm at delta=" + format_number(r.delta));
        checks.expect(r.errors.h1_interior >= r.errors.l2_interior,
                      "H1 error below L2 error at delta=" + format_number(r.delta));
    }
    log << "  slopes: l2 " << format_number(report.l2_interior.slope) << ", h1 "
        << format_number(report.h1_interior.slope) << ", flux " << format_number(report.l2_flux.slope) << '\n';
    return checks.status();
}

int run_eigen(const RunConfig& config, const fs::path& out_dir, std::ostream& log, Checks& checks) {
    const auto study = eigen_study(config.ladder(), config.eigen_count, config.kernel, config.ratio);
    write_file(out_dir / "eigen.csv", [&](std::ostream& out) { write_eigen_csv(out, study); });
    log << "eigen study with " << study.rows.size() << " rows\n";
    for (const auto& r : study.rows) {
        log << "  delta " << format_number(r.delta) << ":";
        for (std::size_t m = 0; m < r.lambda.size(); ++m) {
            log << " lambda" << m + 1 << '=' << format_number(r.lambda[m]);
            checks.expect(r.lambda[m] > 0.0, "nonpositive eigenvalue at delta=" + format_number(r.delta));
            if (m > 0) {
                checks.expect(r.lambda[m] >= r.lambda[m - 1],
                              "eigenvalues out of order at delta=" + format_number(r.delta));
            }
        }
        log << '\n';
    }
    for (std::size_t m = 0; m < study.slopes.size(); ++m) {
        log << "  slope lambda" << m + 1 << " = " << format_number(study.slopes[m].slope) << '\n';
    }
    return checks.status();
}

}  // namespace

int run(const RunConfig& config, Command command, const fs::path& out_dir, std::ostream& log, std::ostream& err) {
    if (config.command && *config.command != command) {
        throw Error(ErrorCode::Config, std::string("config says command '") + command_name(*config.command) +
                                           "' but '" + command_name(command) + "' was requested");
    }
    require_for_command(config, command);
    if (command != Command::CheckKernel) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + out_dir.string() + "'");
    }
    Checks checks{err};
    switch (command) {
        case Command::CheckKernel: return run_check_kernel(config, log, checks);
        case Command::MassReport: return run_mass_report(config, out_dir, log, checks);
        case Command::Solve: return run_solve(config, out_dir, log, checks);
        case Command::Study: return run_study(config, out_dir, log, checks);
        case Command::Eigen: return run_eigen(config, out_dir, log, checks);
    }
    return 1;
}

}  // namespace nlpoisson
