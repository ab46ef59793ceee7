#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlpoisson/error.hpp"
#include "nlpoisson/solver.hpp"
#include "support.hpp"

using namespace nlpoisson;

TEST_SUITE("solver") {

TEST_CASE("option validation") {
    SolveOptions o;
    CHECK_NOTHROW(validate(o));
    o.relative_residual_tol = 0.0;
    CHECK_THROWS_AS(validate(o), Error);
    o.relative_residual_tol = 1.0;
    CHECK_THROWS_AS(validate(o), Error);
    o = {};
    o.max_iterations = 0;
    CHECK_THROWS_AS(validate(o), Error);
}

TEST_CASE("zero right-hand side") {
    const auto s = testing::setup("zero1d", 0.1);
    const auto sol = solve_spd(assemble_eliminated(s.domain, s.kernel, s.params, s.problem));
    CHECK(sol.iterations <= 1);
    CHECK(sol.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("CG meets the residual contract and matches the dense oracle") {
    const auto d = interval_domain(256);
    const auto k = testing::kernel(1, 0.1);
    const auto sys = assemble_eliminated(d, k, testing::params(0.1), builtin_problem("sine1d"));
    const auto sol = solve_spd(sys);
    CHECK(sol.final_residual <= 1e-12 * sol.initial_residual);
    // The reported residual is the true one.
    CHECK((sys.rhs - sys.apply(sol.u)).norm() == doctest::Approx(sol.final_residual).epsilon(1e-6));
    const auto dense = solve_dense(sys);
    CHECK((sol.u - dense.u).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((sol.v - dense.v).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("unpreconditioned CG and residual monotonicity") {
    const auto s = testing::setup("sine1d", 0.025);
    const auto sys = assemble_eliminated(s.domain, s.kernel, s.params, s.problem);
    SolveOptions o;
    o.preconditioner = Preconditioner::None;
    const auto sol = solve_spd(sys, o);
    const auto& hist = sol.residual_history;
    INFO("iterations " << sol.iterations);
    // The operator is well conditioned at this ratio, so CG may finish inside
    // one 50-step window; then the window spans the whole history.
    REQUIRE(hist.size() >= 2);
    const std::size_t window = std::min<std::size_t>(50, hist.size() - 1);
    for (std::size_t i = 0; i + window < hist.size(); ++i) CHECK(hist[i + window] < hist[i]);
    const auto pre = solve_spd(sys);
    CHECK((sol.u - pre.u).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("non-convergence carries the residual history") {
    const auto s = testing::setup("sine1d", 0.05);
    const auto sys = assemble_eliminated(s.domain, s.kernel, s.params, s.problem);
    SolveOptions o;
    o.max_iterations = 2;
    try {
        solve_spd(sys, o);
        FAIL("expected non-convergence");
    } catch (const NonConvergenceError& e) {
        CHECK(e.code() == ErrorCode::NonConvergence);
        CHECK(e.residual_history().size() == 3);
    }
}

TEST_CASE("asymmetric systems are rejected") {
    const auto s = testing::setup("sine1d", 0.1);
    auto sys = assemble_eliminated(s.domain, s.kernel, s.params, s.problem);
    sys.interior.coeffRef(0, 1) *= 1.01;
    CHECK_THROWS_AS(solve_spd(sys), Error);
}

TEST_CASE("coupled solve") {
    const auto s = testing::setup("zero1d", 0.1);
    ModelParams p = s.params;
    p.formulation = Formulation::Coupled;
    const auto sol = solve_coupled(assemble(s.domain, s.kernel, p, s.problem));
    CHECK(sol.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(solve_coupled(assemble_eliminated(s.domain, s.kernel, s.params, s.problem)), Error);

    // Robin stability sanity bound.
    const auto problem = builtin_problem("robin1d", 1.0);
    const auto d = interval_domain(200);
    const auto k = testing::kernel(1, 0.1);
    ModelParams rp = testing::params(0.1, problem.boundary);
    rp.formulation = Formulation::Coupled;
    const auto rsol = solve_coupled(assemble(d, k, rp, problem));
    CHECK(rsol.u.allFinite());
    CHECK(rsol.u.cwiseAbs().maxCoeff() <= 2.0 * 1.25);
}

TEST_CASE("generalized eigenpairs") {
    const auto d = interval_domain(160);
    const auto k = testing::kernel(1, 0.05);
    const auto eig = assemble_eigen(d, k, testing::params(0.05));
    const auto res = smallest_eigenpairs(eig.stiffness, eig.mass, 3);
    REQUIRE(res.pairs.size() == 3);
    for (std::size_t a = 0; a < 3; ++a) {
        CHECK(res.pairs[a].lambda > 0.0);
        CHECK(res.pairs[a].residual <= 1e-8);
        const Vector Aphi = eig.stiffness.apply(res.pairs[a].phi);
        const Vector Mphi = eig.mass * res.pairs[a].phi;
        CHECK((Aphi - res.pairs[a].lambda * Mphi).norm() <= 1e-8 * Aphi.norm());
        if (a > 0) CHECK(res.pairs[a].lambda >= res.pairs[a - 1].lambda);
        for (std::size_t b = 0; b < 3; ++b) {
            const double ip = res.pairs[a].phi.dot(eig.mass * res.pairs[b].phi);
            CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 1e-8);
        }
    }
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(res.pairs[0].lambda == doctest::Approx(pi2).epsilon(0.05));
    CHECK(res.pairs[1].lambda == doctest::Approx(4 * pi2).epsilon(0.05));

    // Against a dense generalized solver on the explicit matrices.
    const Eigen::MatrixXd A = eig.stiffness.to_dense();
    const Eigen::MatrixXd M = Eigen::MatrixXd(eig.mass);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(M, A);
    const Eigen::VectorXd mu = dense.eigenvalues();
    for (int m = 0; m < 3; ++m) {
        CHECK(res.pairs[static_cast<std::size_t>(m)].lambda ==
              doctest::Approx(1.0 / mu[mu.size() - 1 - m]).epsilon(1e-9));
    }

    // Same seed, same answer.
    const auto again = smallest_eigenpairs(eig.stiffness, eig.mass, 3);
    CHECK(again.pairs[0].lambda == res.pairs[0].lambda);
    CHECK(again.pairs[2].phi == res.pairs[2].phi);

    CHECK_THROWS_AS(smallest_eigenpairs(eig.stiffness, eig.mass, 11), Error);
    SparseMatrix skew = eig.mass;
    skew.coeffRef(0, 1) += 1.0;
    CHECK_THROWS_AS(smallest_eigenpairs(eig.stiffness, skew, 2), Error);
}

}  // TEST_SUITE
