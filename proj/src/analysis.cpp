#include "nlpoisson/analysis.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "nlpoisson/error.hpp"
#include "nlpoisson/neighbors.hpp"

namespace nlpoisson {

namespace {

constexpr double pi = std::numbers::pi;

double weighted_l2(const std::vector<double>& values, const std::vector<double>& weights) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) acc.add(weights[i] * values[i] * values[i]);
    return std::sqrt(acc.value());
}

void check_delta_list(const std::vector<double>& delta_list, std::size_t min_rows) {
    if (delta_list.size() < min_rows) {
        throw Error(ErrorCode::InvalidArgument,
                    "a study needs at least " + std::to_string(min_rows) + " delta values");
    }
    for (std::size_t i = 0; i < delta_list.size(); ++i) {
        if (!(delta_list[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta values must be positive");
        if (i > 0 && !(delta_list[i] < delta_list[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "delta_list must be strictly decreasing");
        }
    }
}

// Re-raises an error with the failing horizon prepended.
[[noreturn]] void rethrow_with_delta(double delta) {
    std::ostringstream prefix;
    prefix << "delta=" << delta << ": ";
    try {
        throw;
    } catch (const NonConvergenceError& e) {
        throw NonConvergenceError(prefix.str() + e.what(), e.residual_history());
    } catch (const Error& e) {
        throw Error(e.code(), prefix.str() + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

const char* gradient_mode_name(GradientMode mode) {
    return mode == GradientMode::Smoothed ? "smoothed" : "interpolant";
}

std::vector<Point> gradient_recovery(const Vector& u, const DomainQuadrature& domain,
                                     const RescaledKernel& kernel, const ModelParams& params) {
    if (static_cast<std::size_t>(u.size()) != domain.n_interior()) {
        throw Error(ErrorCode::InvalidArgument, "gradient recovery: u has the wrong length");
    }
    const CellGrid grid(domain.interior_nodes, domain.dimension, kernel.support_radius());
    const auto& nodes = domain.interior_nodes;
    const auto& w = domain.interior_weights;
    // Same floor as the assembly uses for the boundary weight, applied to w̄.
    const double floor =
        volume_mass_constant(kernel.profile(), Ladder::Rbar, domain.dimension, kernel.alpha()) / 6.0;
    (void)params;

    std::vector<Point> grad(nodes.size());
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        grid.query(nodes[i], kernel.support_radius(), near);
        CompensatedSum S, W;
        std::array<CompensatedSum, 3> dS, dW;
        for (std::size_t k : near) {
            const double value = kernel.eval(Ladder::Rbar, nodes[i], nodes[k]) * w[k];
            const Point g = kernel.grad_x(Ladder::Rbar, nodes[i], nodes[k]);
            S.add(value * u[static_cast<Eigen::Index>(k)]);
            W.add(value);
            for (int d = 0; d < 3; ++d) {
                dS[d].add(g[d] * w[k] * u[static_cast<Eigen::Index>(k)]);
                dW[d].add(g[d] * w[k]);
            }
        }
        const double wbar = W.value();
        if (!(wbar > floor)) {
            throw Error(ErrorCode::Assembly, "gradient recovery: w_bar below floor at interior node " +
                                                 std::to_string(i));
        }
        for (int d = 0; d < 3; ++d) {
            grad[i][d] = (dS[d].value() * wbar - S.value() * dW[d].value()) / (wbar * wbar);
        }
    }
    return grad;
}

std::vector<Point> interpolant_gradient(const Vector& u, const Vector& v,
                                        const ManufacturedProblem& problem,
                                        const DomainQuadrature& domain,
                                        const RescaledKernel& kernel, const ModelParams& params) {
    if (static_cast<std::size_t>(u.size()) != domain.n_interior() ||
        static_cast<std::size_t>(v.size()) != domain.n_boundary()) {
        throw Error(ErrorCode::InvalidArgument, "interpolant gradient: (u, v) have the wrong length");
    }
    const double d2 = params.delta * params.delta;
    const CellGrid interior(domain.interior_nodes, domain.dimension, kernel.support_radius());
    const CellGrid boundary(domain.boundary_nodes, domain.dimension, kernel.support_radius());
    const auto& nodes = domain.interior_nodes;
    const auto& w = domain.interior_weights;
    std::vector<double> f(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) f[k] = problem.f(nodes[k]);

    std::vector<Point> grad(nodes.size());
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Point& x = nodes[i];
        // u_δ = N / D with N = Σ R u w + δ² (2 Σ R̄ v τ + Σ R̄ f w) and D = Σ R w.
        CompensatedSum N, D;
        std::array<CompensatedSum, 3> dN, dD;
        interior.query(x, kernel.support_radius(), near);
        for (std::size_t k : near) {
            const double R = kernel.eval(Ladder::R, x, nodes[k]) * w[k];
            const Point gR = kernel.grad_x(Ladder::R, x, nodes[k]);
            const Point gRbar = kernel.grad_x(Ladder::Rbar, x, nodes[k]);
            const double uk = u[static_cast<Eigen::Index>(k)];
            N.add(R * uk + d2 * kernel.eval(Ladder::Rbar, x, nodes[k]) * f[k] * w[k]);
            D.add(R);
            for (int d = 0; d < 3; ++d) {
                dN[d].add(gR[d] * w[k] * uk + d2 * gRbar[d] * f[k] * w[k]);
                dD[d].add(gR[d] * w[k]);
            }
        }
        boundary.query(x, kernel.support_radius(), near);
        for (std::size_t j : near) {
            const double scale = 2.0 * d2 * v[static_cast<Eigen::Index>(j)] * domain.boundary_weights[j];
            const Point g = kernel.grad_x(Ladder::Rbar, x, domain.boundary_nodes[j]);
            N.add(scale * kernel.eval(Ladder::Rbar, x, domain.boundary_nodes[j]));
            for (int d = 0; d < 3; ++d) dN[d].add(scale * g[d]);
        }
        const double denom = D.value();
        if (!(denom > 0.0)) {
            throw Error(ErrorCode::Assembly, "interpolant gradient: empty kernel neighbourhood");
        }
        for (int d = 0; d < 3; ++d) {
            grad[i][d] = (dN[d].value() * denom - N.value() * dD[d].value()) / (denom * denom);
        }
    }
    return grad;
}

double nonlocal_energy(const Vector& e, const DomainQuadrature& domain, const RescaledKernel& kernel) {
    const CellGrid grid(domain.interior_nodes, domain.dimension, kernel.support_radius());
    const auto& nodes = domain.interior_nodes;
    const auto& w = domain.interior_weights;
    CompensatedSum total;
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        grid.query(nodes[i], kernel.support_radius(), near);
        for (std::size_t k : near) {
            const double diff = e[static_cast<Eigen::Index>(i)] - e[static_cast<Eigen::Index>(k)];
            total.add(kernel.eval(Ladder::R, nodes[i], nodes[k]) * diff * diff * w[i] * w[k]);
        }
    }
    const double delta = kernel.delta();
    return total.value() / (2.0 * delta * delta);
}

double boundary_energy(const Vector& u, const NonlocalSystem& system, const DomainQuadrature& domain) {
    const double d2 = system.params.delta * system.params.delta;
    const Vector smoothed = system.coupling.transpose() * u;
    CompensatedSum total;
    for (std::size_t j = 0; j < domain.n_boundary(); ++j) {
        const double s = smoothed[static_cast<Eigen::Index>(j)];
        total.add(domain.boundary_weights[j] * s * s / system.weights.what[j]);
    }
    return total.value() / d2;
}

ErrorReport error_norms(const Solution& solution, const ManufacturedProblem& problem,
                        const DomainQuadrature& domain, const RescaledKernel& kernel,
                        const ModelParams& params, GradientMode mode) {
    const auto n_in = domain.n_interior();
    const auto n_bd = domain.n_boundary();
    if (static_cast<std::size_t>(solution.u.size()) != n_in ||
        static_cast<std::size_t>(solution.v.size()) != n_bd) {
        throw Error(ErrorCode::InvalidArgument, "error norms: solution does not match the domain");
    }
    Vector e(static_cast<Eigen::Index>(n_in));
    std::vector<double> err(n_in), grad_err(n_in), flux_err(n_bd);
    const auto grad = mode == GradientMode::Smoothed
                          ? gradient_recovery(solution.u, domain, kernel, params)
                          : interpolant_gradient(solution.u, solution.v, problem, domain, kernel, params);
    for (std::size_t i = 0; i < n_in; ++i) {
        const Point& x = domain.interior_nodes[i];
        err[i] = problem.u_exact(x) - solution.u[static_cast<Eigen::Index>(i)];
        e[static_cast<Eigen::Index>(i)] = err[i];
        grad_err[i] = norm(problem.grad_u_exact(x) - grad[i]);
    }
    for (std::size_t j = 0; j < n_bd; ++j) {
        flux_err[j] = problem.flux_exact(domain.boundary_nodes[j], domain.boundary_normals[j]) -
                      solution.v[static_cast<Eigen::Index>(j)];
    }
    ErrorReport report;
    report.l2_interior = weighted_l2(err, domain.interior_weights);
    const double semi = weighted_l2(grad_err, domain.interior_weights);
    report.h1_interior = std::sqrt(report.l2_interior * report.l2_interior + semi * semi);
    report.l2_flux = weighted_l2(flux_err, domain.boundary_weights);
    report.nonlocal_energy = nonlocal_energy(e, domain, kernel);
    return report;
}

SlopeFit fit_slope(const std::vector<double>& delta, const std::vector<double>& error) {
    SlopeFit fit;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (delta.size() != error.size() || delta.size() < 2) {
        return {nan, nan, nan};
    }
    const std::size_t n = delta.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(delta[i] > 0.0) || !(error[i] > 0.0)) return {nan, nan, nan};
        lx[i] = std::log(delta[i]);
        ly[i] = std::log(error[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) return {nan, nan, nan};
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

ConvergenceReport convergence_study(const ManufacturedProblem& problem,
                                    const std::vector<double>& delta_list,
                                    const std::string& kernel_name, const StudyOptions& options) {
    check_delta_list(delta_list, 3);
    validate(options.solve);
    const auto profile = std::make_shared<const KernelProfile>(profile_by_name(kernel_name));

    ConvergenceReport report;
    report.problem = problem.name;
    report.kernel = kernel_name;
    for (double delta : delta_list) {
        try {
            const auto start = std::chrono::steady_clock::now();
            const auto domain = make_domain(problem.domain, resolution_for(problem.domain, delta, options.ratio));
            const RescaledKernel kernel(profile, domain.dimension, delta);
            ModelParams params;
            params.delta = delta;
            params.boundary = problem.boundary;
            params.formulation = options.formulation;
            params.min_coupling_ratio = options.ratio;
            const auto system = assemble(domain, kernel, params, problem);
            const Solution sol = options.formulation == Formulation::Coupled
                                     ? solve_coupled(system, options.solve)
                                     : solve_spd(system, options.solve);
            StudyRow row;
            row.delta = delta;
            row.h = domain.mesh_size_h;
            row.n_interior = domain.n_interior();
            row.n_boundary = domain.n_boundary();
            row.errors = error_norms(sol, problem, domain, kernel, params, options.gradient);
            row.iterations = sol.iterations;
            row.wall_seconds = seconds_since(start);
            report.rows.push_back(row);
        } catch (const Error&) {
            rethrow_with_delta(delta);
        }
    }

    std::vector<double> d, l2, h1, flux, energy;
    for (const auto& row : report.rows) {
        d.push_back(row.delta);
        l2.push_back(row.errors.l2_interior);
        h1.push_back(row.errors.h1_interior);
        flux.push_back(row.errors.l2_flux);
        energy.push_back(row.errors.nonlocal_energy);
    }
    report.l2_interior = fit_slope(d, l2);
    report.h1_interior = fit_slope(d, h1);
    report.l2_flux = fit_slope(d, flux);
    report.nonlocal_energy = fit_slope(d, energy);
    return report;
}

TruncationStudy truncation_study(const ManufacturedProblem& problem, const std::vector<double>& delta_list,
                                 const std::string& kernel_name, double ratio) {
    check_delta_list(delta_list, 3);
    const auto profile = std::make_shared<const KernelProfile>(profile_by_name(kernel_name));
    TruncationStudy study;
    for (double delta : delta_list) {
        try {
            const auto domain = make_domain(problem.domain, resolution_for(problem.domain, delta, ratio));
            const RescaledKernel kernel(profile, domain.dimension, delta);
            ModelParams params;
            params.delta = delta;
            params.boundary = problem.boundary;
            params.min_coupling_ratio = ratio;
            const auto res = truncation_residuals(problem, domain, kernel, params, true);
            study.rows.push_back({delta, res.l2_in, res.l2_bd, *res.l2_bl, *res.l2_it});
        } catch (const Error&) {
            rethrow_with_delta(delta);
        }
    }
    std::vector<double> d, in, bd, it;
    for (const auto& row : study.rows) {
        d.push_back(row.delta);
        in.push_back(row.l2_in);
        bd.push_back(row.l2_bd);
        it.push_back(row.l2_it);
    }
    study.l2_in = fit_slope(d, in);
    study.l2_bd = fit_slope(d, bd);
    study.l2_it = fit_slope(d, it);
    return study;
}

EigenStudy eigen_study(const std::vector<double>& delta_list, int k, const std::string& kernel_name,
                       double ratio, const EigenOptions& options) {
    check_delta_list(delta_list, 3);
    if (k < 1 || k > 3) throw Error(ErrorCode::InvalidArgument, "eigen study supports 1 <= k <= 3");
    const auto profile = std::make_shared<const KernelProfile>(profile_by_name(kernel_name));

    EigenStudy study;
    for (double delta : delta_list) {
        try {
            const auto start = std::chrono::steady_clock::now();
            const auto domain = interval_domain(resolution_for(DomainKind::Interval, delta, ratio));
            const RescaledKernel kernel(profile, 1, delta);
            ModelParams params;
            params.delta = delta;
            params.min_coupling_ratio = ratio;
            const auto system = assemble_eigen(domain, kernel, params);
            const auto result = smallest_eigenpairs(system.stiffness, system.mass, k, options);

            EigenRow row;
            row.delta = delta;
            row.h = domain.mesh_size_h;
            row.n_interior = domain.n_interior();
            row.iterations = result.iterations;
            for (int m = 1; m <= k; ++m) {
                const auto& pair = result.pairs[static_cast<std::size_t>(m - 1)];
                Vector s(static_cast<Eigen::Index>(domain.n_interior()));
                for (std::size_t i = 0; i < domain.n_interior(); ++i) {
                    s[static_cast<Eigen::Index>(i)] = std::sin(m * pi * domain.interior_nodes[i][0]);
                }
                const Vector Ms = system.mass * s;
                const double cosine =
                    pair.phi.dot(Ms) / std::sqrt(pair.phi.dot(system.mass * pair.phi) * s.dot(Ms));
                row.lambda.push_back(pair.lambda);
                row.error.push_back(std::abs(pair.lambda - m * m * pi * pi));
                row.overlap.push_back(std::abs(cosine));
                row.residual.push_back(pair.residual);
            }
            row.wall_seconds = seconds_since(start);
            study.rows.push_back(std::move(row));
        } catch (const Error&) {
            rethrow_with_delta(delta);
        }
    }
    std::vector<double> d;
    for (const auto& row : study.rows) d.push_back(row.delta);
    for (int m = 0; m < k; ++m) {
        std::vector<double> err;
        for (const auto& row : study.rows) err.push_back(row.error[static_cast<std::size_t>(m)]);
        study.slopes.push_back(fit_slope(d, err));
    }
    return study;
}

}  // namespace nlpoisson
