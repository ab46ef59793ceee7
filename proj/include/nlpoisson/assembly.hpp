#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "nlpoisson/geometry.hpp"
#include "nlpoisson/kernels.hpp"

namespace nlpoisson {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Formulation { Coupled, Eliminated };

const char* formulation_name(Formulation f);

inline constexpr double kMinCouplingRatio = 8.0;

struct ModelParams {
    double delta = 0.1;
    BoundaryCondition boundary = BoundaryCondition::dirichlet();
    Formulation formulation = Formulation::Eliminated;
    /// delta / h must be at least this large.
    double min_coupling_ratio = kMinCouplingRatio;
};

/// Throws Assembly errors for a horizon that is too large for the domain or
/// under-resolved by the quadrature.
void validate_params(const ModelParams& params, const DomainQuadrature& domain,
                     const RescaledKernel& kernel);

/// Quadrature approximations of the kernel masses used by the model.
struct WeightFields {
    /// Interior nodes: Σ_k R_δ(x_i, x_k) w_k.
    std::vector<double> w;
    /// Interior nodes: Σ_k R̄_δ(x_i, x_k) w_k.
    std::vector<double> wbar_interior;
    /// Boundary nodes: Σ_k R̄_δ(s_j, x_k) w_k.
    std::vector<double> wbar_boundary;
    /// Boundary nodes: Σ_l R̄̄_δ(s_j, s_l) τ_l.
    std::vector<double> wbarbar;
    /// Boundary nodes: w̄̄ + μ/(2δ^2) w̄ (equals w̄̄ for Dirichlet).
    std::vector<double> what;
    /// Lower bound enforced on w̄̄.
    double wbarbar_floor = 0.0;
};

/// Kernel masses only; throws when w̄̄ falls below its floor.
WeightFields compute_weight_fields(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                   const BoundaryCondition& boundary);

/// Assembled discrete model.
///
/// The eliminated operator is stored in factored form
///   Ã = interior + coupling · diag(boundary_scale) · couplingᵀ
/// where interior = (1/δ²)[diag(w_i Σ_{k≠i} R_ik w_k) − (R_ik w_i w_k)_{k≠i}],
/// coupling_ij = w_i R̄_δ(x_i, s_j) and boundary_scale_j = τ_j / (δ² ŵ_j).
struct NonlocalSystem {
    ModelParams params;
    std::size_t n_interior = 0;
    std::size_t n_boundary = 0;
    WeightFields weights;

    SparseMatrix interior;
    SparseMatrix coupling;
    Vector boundary_scale;
    /// Right-hand side of the eliminated system.
    Vector rhs;

    /// Σ_k R̄̄_δ(s_j, x_k) f_k w_k.
    Vector boundary_source;
    /// b(s_j) w̄_δ(s_j) (zero for homogeneous data).
    Vector boundary_data;

    /// Coupled block system in (u, v); present for Formulation::Coupled.
    std::optional<SparseMatrix> coupled_matrix;
    std::optional<Vector> coupled_rhs;

    std::size_t size() const { return n_interior; }

    /// y = Ã x.
    void apply(const Vector& x, Vector& y) const;
    Vector apply(const Vector& x) const;
    Vector diagonal() const;
    /// Explicit Ã.
    SparseMatrix materialize() const;
    Eigen::MatrixXd to_dense() const;
};

/// Block system over (u at interior nodes, v at boundary nodes), collocated at
/// the nodes. Also fills the eliminated data.
NonlocalSystem assemble_coupled(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                const ModelParams& params, const ManufacturedProblem& problem);

/// Symmetric positive definite system in u alone.
NonlocalSystem assemble_eliminated(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                   const ModelParams& params, const ManufacturedProblem& problem);

/// Dispatches on params.formulation.
NonlocalSystem assemble(const DomainQuadrature& domain, const RescaledKernel& kernel,
                        const ModelParams& params, const ManufacturedProblem& problem);

/// v_j = -(1 / (2δ² ŵ_j)) [Σ_k R̄_δ(s_j,x_k) u_k w_k + δ² Σ_k R̄̄_δ(s_j,x_k) f_k w_k - b_j w̄_j].
Vector recover_flux(const Vector& u, const NonlocalSystem& system);

struct EigenSystem {
    /// Operator with every source contribution dropped.
    NonlocalSystem stiffness;
    /// M_ik = w_i R̄_δ(x_i, x_k) w_k.
    SparseMatrix mass;
};

/// Generalized eigenproblem Ã φ = λ M φ for the Dirichlet Laplacian.
EigenSystem assemble_eigen(const DomainQuadrature& domain, const RescaledKernel& kernel,
                           const ModelParams& params);

struct TruncationResiduals {
    std::vector<double> r_in;
    std::vector<double> r_bd;
    std::optional<std::vector<double>> r_bl;
    double l2_in = 0.0;
    double l2_bd = 0.0;
    std::optional<double> l2_bl;
    /// ‖r_in - r_bl‖ when r_bl is available.
    std::optional<double> l2_it;
};

/// Residuals of the exact solution inserted into the discrete model.
TruncationResiduals truncation_residuals(const ManufacturedProblem& problem,
                                         const DomainQuadrature& domain,
                                         const RescaledKernel& kernel, const ModelParams& params,
                                         bool with_boundary_layer = true);

/// max |A_ik - A_ki| / max |A_ik|.
double relative_asymmetry(const SparseMatrix& A);

}  // namespace nlpoisson
