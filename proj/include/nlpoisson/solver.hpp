#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nlpoisson/assembly.hpp"
#include "nlpoisson/error.hpp"

namespace nlpoisson {

enum class Preconditioner { None, Diagonal };

struct SolveOptions {
    double relative_residual_tol = 1e-12;
    /// Defaults to 10 * N when unset.
    std::optional<int> max_iterations;
    Preconditioner preconditioner = Preconditioner::Diagonal;
};

void validate(const SolveOptions& opts);

/// Thrown when CG exhausts its iteration budget.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& message, std::vector<double> history)
        : Error(ErrorCode::NonConvergence, message), history_(std::move(history)) {}

    const std::vector<double>& residual_history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Symmetric positive definite operator given by its action and diagonal.
struct SpdOperator {
    Eigen::Index size = 0;
    std::function<void(const Vector&, Vector&)> apply;
    Vector diagonal;

    static SpdOperator from(const NonlocalSystem& system);
    static SpdOperator from(const SparseMatrix& matrix);
};

struct CgResult {
    Vector x;
    int iterations = 0;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    /// ‖r_k‖ after every iteration, starting with the initial residual.
    std::vector<double> residual_history;
};

/// Preconditioned conjugate gradients from the zero initial guess. The
/// convergence test uses the true residual b - A x.
CgResult conjugate_gradient(const SpdOperator& op, const Vector& b, const SolveOptions& opts);

struct Solution {
    Vector u;
    Vector v;
    int iterations = 0;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    std::vector<double> residual_history;
};

/// Eliminated system by CG; v recovered from u.
Solution solve_spd(const NonlocalSystem& system, const SolveOptions& opts = {});

/// Coupled block system by sparse LU.
Solution solve_coupled(const NonlocalSystem& system, const SolveOptions& opts = {});

/// Dense Cholesky of the explicit eliminated matrix (reference path, small systems).
Solution solve_dense(const NonlocalSystem& system);

struct EigenOptions {
    /// Tolerance of the inner CG solves.
    double inner_tol = 1e-10;
    /// Required ‖Aφ - λMφ‖ / ‖Aφ‖. Tighter than the 1e-8 guarantee so that
    /// eigenvectors also agree with a dense factorization to 1e-9.
    double residual_tol = 1e-10;
    int max_iterations = 500;
    std::uint64_t seed = 0x5EED;
};

struct EigenPair {
    double lambda = 0.0;
    Vector phi;
    double residual = 0.0;
};

struct EigenResult {
    std::vector<EigenPair> pairs;
    int iterations = 0;
    int inner_iterations = 0;
};

/// The k smallest eigenvalues of A φ = λ M φ by block inverse iteration with
/// Rayleigh-Ritz projection. Returned vectors are M-orthonormal and
/// sign-normalized (largest-magnitude entry positive).
EigenResult smallest_eigenpairs(const NonlocalSystem& A, const SparseMatrix& M, int k,
                                const EigenOptions& opts = {});

}  // namespace nlpoisson
