#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlpoisson/assembly.hpp"
#include "nlpoisson/geometry.hpp"
#include "nlpoisson/kernels.hpp"
#include "nlpoisson/solver.hpp"

namespace nlpoisson {

/// How the H¹ seminorm of the discrete solution is measured.
enum class GradientMode {
    /// ∇[(1/w̄_δ) Σ R̄_δ(x,·) u w], the smoothed construct of the coercivity proof.
    Smoothed,
    /// Exact gradient of the Nyström interpolant of the interior equation.
    Interpolant,
};

const char* gradient_mode_name(GradientMode mode);

/// Smoothed gradient ∇[(1/w̄_δ) Σ_k R̄_δ(x_i,x_k) u_k w_k] at every interior node,
/// by the quotient rule with analytic kernel gradients.
std::vector<Point> gradient_recovery(const Vector& u, const DomainQuadrature& domain,
                                     const RescaledKernel& kernel, const ModelParams& params);

/// Gradient at the interior nodes of the function obtained by solving the
/// interior equation for u(x) pointwise:
///   u_δ(x) = [Σ R_δ(x,x_k) u_k w_k + δ² (2 Σ R̄_δ(x,s_j) v_j τ_j + Σ R̄_δ(x,x_k) f_k w_k)] / w_δ(x).
std::vector<Point> interpolant_gradient(const Vector& u, const Vector& v,
                                        const ManufacturedProblem& problem,
                                        const DomainQuadrature& domain,
                                        const RescaledKernel& kernel, const ModelParams& params);

struct ErrorReport {
    double l2_interior = 0.0;
    /// sqrt(‖e‖² + ‖∇e‖²).
    double h1_interior = 0.0;
    double l2_flux = 0.0;
    double nonlocal_energy = 0.0;
};

/// (1/2δ²) Σ_i Σ_k R_δ(x_i,x_k) (e_i - e_k)² w_i w_k.
double nonlocal_energy(const Vector& e, const DomainQuadrature& domain, const RescaledKernel& kernel);

/// (1/δ²) Σ_j τ_j (Σ_k R̄_δ(s_j,x_k) u_k w_k)² / ŵ_j: the boundary part of uᵀÃu.
double boundary_energy(const Vector& u, const NonlocalSystem& system, const DomainQuadrature& domain);

ErrorReport error_norms(const Solution& solution, const ManufacturedProblem& problem,
                        const DomainQuadrature& domain, const RescaledKernel& kernel,
                        const ModelParams& params, GradientMode mode = GradientMode::Interpolant);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Root-mean-square residual of the log-log fit.
    double residual = 0.0;
};

/// Ordinary least squares of log(error) against log(delta). Needs >= 2 points
/// and strictly positive values; returns NaN slope otherwise.
SlopeFit fit_slope(const std::vector<double>& delta, const std::vector<double>& error);

struct StudyOptions {
    double ratio = kMinCouplingRatio;
    Formulation formulation = Formulation::Eliminated;
    SolveOptions solve;
    GradientMode gradient = GradientMode::Interpolant;
};

struct StudyRow {
    double delta = 0.0;
    double h = 0.0;
    std::size_t n_interior = 0;
    std::size_t n_boundary = 0;
    ErrorReport errors;
    int iterations = 0;
    double wall_seconds = 0.0;
};

struct ConvergenceReport {
    std::string problem;
    std::string kernel;
    std::vector<StudyRow> rows;
    SlopeFit l2_interior, h1_interior, l2_flux, nonlocal_energy;
};

/// One solve per delta at resolution h <= delta / ratio, then error norms and
/// least-squares rates. delta_list must hold >= 3 strictly decreasing values.
ConvergenceReport convergence_study(const ManufacturedProblem& problem,
                                    const std::vector<double>& delta_list,
                                    const std::string& kernel_name, const StudyOptions& options = {});

struct TruncationRow {
    double delta = 0.0;
    double l2_in = 0.0;
    double l2_bd = 0.0;
    double l2_bl = 0.0;
    double l2_it = 0.0;
};

struct TruncationStudy {
    std::vector<TruncationRow> rows;
    SlopeFit l2_in, l2_bd, l2_it;
};

TruncationStudy truncation_study(const ManufacturedProblem& problem, const std::vector<double>& delta_list,
                                 const std::string& kernel_name, double ratio = kMinCouplingRatio);

struct EigenRow {
    double delta = 0.0;
    double h = 0.0;
    std::size_t n_interior = 0;
    std::vector<double> lambda;
    /// |λ_m - m²π²|.
    std::vector<double> error;
    /// M-inner-product cosine between φ_m and sin(mπx), sign-fixed to be >= 0.
    std::vector<double> overlap;
    std::vector<double> residual;
    int iterations = 0;
    double wall_seconds = 0.0;
};

struct EigenStudy {
    std::vector<EigenRow> rows;
    /// Fitted slope of the eigenvalue error per mode.
    std::vector<SlopeFit> slopes;
};

/// Dirichlet eigenvalues of the unit interval (reference m²π²).
EigenStudy eigen_study(const std::vector<double>& delta_list, int k, const std::string& kernel_name,
                       double ratio = kMinCouplingRatio, const EigenOptions& options = {});

}  // namespace nlpoisson
