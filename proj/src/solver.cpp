#include "nlpoisson/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>

namespace nlpoisson {

namespace {
constexpr double kAsymmetryTol = 1e-12;
}

void validate(const SolveOptions& opts) {
    if (!(opts.relative_residual_tol > 0.0 && opts.relative_residual_tol < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "relative residual tolerance must lie in (0, 1)");
    }
    if (opts.max_iterations && *opts.max_iterations < 1) {
        throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
    }
}

SpdOperator SpdOperator::from(const NonlocalSystem& system) {
    SpdOperator op;
    op.size = static_cast<Eigen::Index>(system.size());
    op.apply = [&system](const Vector& x, Vector& y) { system.apply(x, y); };
    op.diagonal = system.diagonal();
    return op;
}

SpdOperator SpdOperator::from(const SparseMatrix& matrix) {
    SpdOperator op;
    op.size = matrix.rows();
    op.apply = [&matrix](const Vector& x, Vector& y) { y.noalias() = matrix * x; };
    op.diagonal = matrix.diagonal();
    return op;
}

CgResult conjugate_gradient(const SpdOperator& op, const Vector& b, const SolveOptions& opts) {
    validate(opts);
    const Eigen::Index n = op.size;
    if (b.size() != n) throw Error(ErrorCode::InvalidArgument, "CG: right-hand side has the wrong length");
    const int max_it = opts.max_iterations.value_or(static_cast<int>(std::max<Eigen::Index>(10 * n, 1)));

    Vector inv_diag = Vector::Ones(n);
    if (opts.preconditioner == Preconditioner::Diagonal) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(op.diagonal[i] > 0.0)) {
                throw Error(ErrorCode::Invariant, "CG: nonpositive diagonal entry; operator is not SPD");
            }
            inv_diag[i] = 1.0 / op.diagonal[i];
        }
    }

    CgResult res;
    res.x = Vector::Zero(n);
    Vector r = b;
    res.initial_residual = r.norm();
    res.final_residual = res.initial_residual;
    res.residual_history.push_back(res.initial_residual);
    if (res.initial_residual == 0.0) return res;
    const double target = opts.relative_residual_tol * res.initial_residual;

    Vector z = inv_diag.cwiseProduct(r);
    Vector p = z;
    Vector Ap(n);
    double rz = r.dot(z);
    for (int it = 1; it <= max_it; ++it) {
        op.apply(p, Ap);
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0)) {
            throw Error(ErrorCode::Invariant, "CG: search direction with nonpositive curvature; operator is not SPD");
        }
        const double alpha = rz / pAp;
        res.x.noalias() += alpha * p;
        r.noalias() -= alpha * Ap;
        double rnorm = r.norm();
        res.iterations = it;
        if (rnorm <= target) {
            // Confirm with the true residual; restart from it if the recurrence drifted.
            op.apply(res.x, Ap);
            r = b - Ap;
            rnorm = r.norm();
            res.residual_history.push_back(rnorm);
            res.final_residual = rnorm;
            if (rnorm <= target) return res;
            z = inv_diag.cwiseProduct(r);
            p = z;
            rz = r.dot(z);
            continue;
        }
        res.residual_history.push_back(rnorm);
        res.final_residual = rnorm;
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    std::ostringstream msg;
    msg << "CG did not converge in " << max_it << " iterations (relative residual "
        << res.final_residual / res.initial_residual << ")";
    throw NonConvergenceError(msg.str(), std::move(res.residual_history));
}

Solution solve_spd(const NonlocalSystem& system, const SolveOptions& opts) {
    const double asym = relative_asymmetry(system.interior);
    if (asym > kAsymmetryTol) {
        std::ostringstream msg;
        msg << "eliminated matrix is not symmetric (relative defect " << asym << ")";
        throw Error(ErrorCode::Invariant, msg.str());
    }
    const auto op = SpdOperator::from(system);
    auto cg = conjugate_gradient(op, system.rhs, opts);
    Solution sol;
    sol.v = recover_flux(cg.x, system);
    sol.u = std::move(cg.x);
    sol.iterations = cg.iterations;
    sol.initial_residual = cg.initial_residual;
    sol.final_residual = cg.final_residual;
    sol.residual_history = std::move(cg.residual_history);
    return sol;
}

Solution solve_coupled(const NonlocalSystem& system, const SolveOptions& opts) {
    validate(opts);
    if (!system.coupled_matrix || !system.coupled_rhs) {
        throw Error(ErrorCode::InvalidArgument, "solve_coupled needs a system assembled in coupled form");
    }
    const Eigen::SparseMatrix<double> A = *system.coupled_matrix;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorCode::Singular, "coupled system factorization failed (check delta/h): " + lu.lastErrorMessage());
    }
    const Vector x = lu.solve(*system.coupled_rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw Error(ErrorCode::Singular, "coupled system solve failed");
    }
    const auto n_in = static_cast<Eigen::Index>(system.n_interior);
    const auto n_bd = static_cast<Eigen::Index>(system.n_boundary);
    Solution sol;
    sol.u = x.head(n_in);
    sol.v = x.tail(n_bd);
    sol.initial_residual = system.coupled_rhs->norm();
    sol.final_residual = (*system.coupled_rhs - *system.coupled_matrix * x).norm();
    return sol;
}

Solution solve_dense(const NonlocalSystem& system) {
    const Eigen::MatrixXd A = system.to_dense();
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::Singular, "dense Cholesky failed: matrix is not positive definite");
    }
    Solution sol;
    sol.u = llt.solve(system.rhs);
    sol.v = recover_flux(sol.u, system);
    sol.initial_residual = system.rhs.norm();
    sol.final_residual = (system.rhs - A * sol.u).norm();
    return sol;
}

EigenResult smallest_eigenpairs(const NonlocalSystem& A, const SparseMatrix& M, int k,
                                const EigenOptions& opts) {
    const auto n = static_cast<Eigen::Index>(A.size());
    if (k < 1 || k > 10) throw Error(ErrorCode::InvalidArgument, "eigenpair count must lie in [1, 10]");
    if (M.rows() != n || M.cols() != n) throw Error(ErrorCode::InvalidArgument, "mass matrix has the wrong size");
    if (k > n) throw Error(ErrorCode::InvalidArgument, "more eigenpairs requested than unknowns");
    if (relative_asymmetry(M) > kAsymmetryTol || relative_asymmetry(A.interior) > kAsymmetryTol) {
        throw Error(ErrorCode::InvalidArgument, "eigenproblem matrices must be symmetric");
    }

    const Eigen::Index block = std::min<Eigen::Index>(n, std::max(2 * k, k + 4));
    const auto op = SpdOperator::from(A);
    SolveOptions inner;
    inner.relative_residual_tol = opts.inner_tol;

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd X(n, block);
    for (Eigen::Index c = 0; c < block; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) X(i, c) = dist(rng);
    }

    EigenResult result;
    Eigen::MatrixXd Y(n, block), AQ(n, block), MQ(n, block);
    Vector col(n);
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        result.iterations = iter;
        for (Eigen::Index c = 0; c < block; ++c) {
            const Vector rhs = M * X.col(c);
            auto cg = conjugate_gradient(op, rhs, inner);
            result.inner_iterations += cg.iterations;
            Y.col(c) = cg.x;
        }
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
        const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
        for (Eigen::Index c = 0; c < block; ++c) {
            A.apply(Q.col(c), col);
            AQ.col(c) = col;
            MQ.col(c) = M * Q.col(c);
        }
        Eigen::MatrixXd Ka = Q.transpose() * AQ;
        Eigen::MatrixXd Km = Q.transpose() * MQ;
        Ka = 0.5 * (Ka + Ka.transpose()).eval();
        Km = 0.5 * (Km + Km.transpose()).eval();
        // Km c = mu Ka c with Ka positive definite; lambda = 1 / mu.
        const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Km, Ka);
        if (ges.info() != Eigen::Success) {
            throw Error(ErrorCode::NonConvergence, "Rayleigh-Ritz projection failed");
        }
        const Eigen::MatrixXd C = ges.eigenvectors().rowwise().reverse();
        const Vector mu = ges.eigenvalues().reverse();
        X = Q * C;

        bool converged = true;
        std::vector<EigenPair> pairs;
        for (int m = 0; m < k; ++m) {
            if (!(mu[m] > 0.0)) {
                converged = false;
                break;
            }
            EigenPair pair;
            pair.lambda = 1.0 / mu[m];
            pair.phi = X.col(m);
            const Vector Mphi = M * pair.phi;
            const Vector Aphi = A.apply(pair.phi);
            pair.residual = (Aphi - pair.lambda * Mphi).norm() / Aphi.norm();
            if (!(pair.residual <= opts.residual_tol)) converged = false;
            pairs.push_back(std::move(pair));
        }
        if (!converged) continue;

        for (auto& pair : pairs) {
            const double mass = pair.phi.dot(M * pair.phi);
            if (!(mass > 0.0)) {
                throw Error(ErrorCode::Invariant, "mass matrix is not positive definite on the eigenspace");
            }
            pair.phi /= std::sqrt(mass);
            Eigen::Index pivot = 0;
            pair.phi.cwiseAbs().maxCoeff(&pivot);
            if (pair.phi[pivot] < 0.0) pair.phi = -pair.phi;
        }
        result.pairs = std::move(pairs);
        return result;
    }
    throw Error(ErrorCode::NonConvergence,
                "eigensolver did not converge in " + std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace nlpoisson
