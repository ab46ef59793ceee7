#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "nlpoisson/analysis.hpp"
#include "nlpoisson/error.hpp"
#include "support.hpp"

using namespace nlpoisson;

namespace {

constexpr double pi = std::numbers::pi;

Vector sample(const DomainQuadrature& d, const ScalarField& f) {
    Vector v(static_cast<Eigen::Index>(d.n_interior()));
    for (std::size_t i = 0; i < d.n_interior(); ++i) v[static_cast<Eigen::Index>(i)] = f(d.interior_nodes[i]);
    return v;
}

Solution exact_solution(const ManufacturedProblem& p, const DomainQuadrature& d) {
    Solution s;
    s.u = sample(d, p.u_exact);
    s.v.resize(static_cast<Eigen::Index>(d.n_boundary()));
    for (std::size_t j = 0; j < d.n_boundary(); ++j) {
        s.v[static_cast<Eigen::Index>(j)] = p.flux_exact(d.boundary_nodes[j], d.boundary_normals[j]);
    }
    return s;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("slope fit recovers synthetic rates") {
    const std::vector<double> delta = {0.2, 0.1, 0.05, 0.025};
    for (double p : {0.5, 1.0, 2.0}) {
        std::vector<double> err;
        for (double d : delta) err.push_back(3.7 * std::pow(d, p));
        const auto fit = fit_slope(delta, err);
        CHECK(std::abs(fit.slope - p) <= 1e-6);
        CHECK(fit.residual <= 1e-12);
    }
    CHECK(std::isnan(fit_slope({0.1, 0.05}, {0.0, 1.0}).slope));
    CHECK(std::isnan(fit_slope({0.1}, {1.0}).slope));
}

TEST_CASE("smoothed gradient of constants and linear functions") {
    const double delta = 0.1;
    const auto k = testing::kernel(1, delta);
    const auto d = interval_domain(80);
    const auto c = gradient_recovery(Vector::Constant(80, 4.2), d, k, testing::params(delta));
    for (const auto& g : c) CHECK(std::abs(g[0]) <= 1e-12);

    // Linear reproduction holds up to an O((h/δ)⁴) quadrature error, so it is
    // checked at δ/h = 80.
    const auto fine = interval_domain(800);
    const auto g = gradient_recovery(sample(fine, [](const Point& x) { return 2.5 * x[0]; }), fine, k,
                                     testing::params(delta));
    for (std::size_t i = 0; i < fine.n_interior(); ++i) {
        const double x = fine.interior_nodes[i][0];
        if (x > 2 * delta && x < 1 - 2 * delta) CHECK(std::abs(g[i][0] - 2.5) <= 1e-8);
    }
}

TEST_CASE("recovered gradients converge on exact samples") {
    const auto problem = builtin_problem("sine1d");
    double previous = std::numeric_limits<double>::infinity();
    for (double delta : {0.2, 0.1, 0.05}) {
        const auto s = testing::setup("sine1d", delta);
        const auto exact = exact_solution(problem, s.domain);
        const auto g = interpolant_gradient(exact.u, exact.v, problem, s.domain, s.kernel, s.params);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            worst = std::max(worst, std::abs(g[i][0] - pi * std::cos(pi * s.domain.interior_nodes[i][0])));
        }
        CHECK(worst < previous);
        previous = worst;
    }
}

TEST_CASE("error norms") {
    const auto z = testing::setup("zero1d", 0.1);
    const auto ez = error_norms(exact_solution(z.problem, z.domain), z.problem, z.domain, z.kernel, z.params);
    CHECK(ez.l2_interior <= 1e-10);
    CHECK(ez.h1_interior <= 1e-10);
    CHECK(ez.l2_flux <= 1e-10);

    const auto s = testing::setup("sine1d", 0.1);
    const auto sol = solve_spd(assemble_eliminated(s.domain, s.kernel, s.params, s.problem));
    for (auto mode : {GradientMode::Interpolant, GradientMode::Smoothed}) {
        const auto e = error_norms(sol, s.problem, s.domain, s.kernel, s.params, mode);
        CHECK(std::isfinite(e.h1_interior));
        CHECK(e.h1_interior >= e.l2_interior);
        CHECK(e.l2_flux >= 0.0);
        CHECK(e.nonlocal_energy >= 0.0);
    }

    // Reversing the node order leaves every norm unchanged.
    auto rev = s.domain;
    std::reverse(rev.interior_nodes.begin(), rev.interior_nodes.end());
    std::reverse(rev.interior_weights.begin(), rev.interior_weights.end());
    std::reverse(rev.boundary_nodes.begin(), rev.boundary_nodes.end());
    std::reverse(rev.boundary_weights.begin(), rev.boundary_weights.end());
    std::reverse(rev.boundary_normals.begin(), rev.boundary_normals.end());
    Solution rsol = sol;
    rsol.u = sol.u.reverse();
    rsol.v = sol.v.reverse();
    const auto a = error_norms(sol, s.problem, s.domain, s.kernel, s.params);
    const auto b = error_norms(rsol, s.problem, rev, s.kernel, s.params);
    CHECK(a.l2_interior == doctest::Approx(b.l2_interior).epsilon(1e-13));
    CHECK(a.h1_interior == doctest::Approx(b.h1_interior).epsilon(1e-13));
    CHECK(a.l2_flux == doctest::Approx(b.l2_flux).epsilon(1e-13));
    CHECK(a.nonlocal_energy == doctest::Approx(b.nonlocal_energy).epsilon(1e-13));
}

TEST_CASE("energy identity on the solved field") {
    const auto s = testing::setup("paraboloid2d", 0.2);
    const auto sys = assemble_eliminated(s.domain, s.kernel, s.params, s.problem);
    const auto sol = solve_spd(sys);
    const double form = sol.u.dot(sys.apply(sol.u));
    const double split = nonlocal_energy(sol.u, s.domain, s.kernel) + boundary_energy(sol.u, sys, s.domain);
    CHECK(split == doctest::Approx(form).epsilon(1e-10));
}

TEST_CASE("convergence study bookkeeping and monotone refinement") {
    for (const auto* name : {"sine1d", "robin1d"}) {
        const auto report = convergence_study(builtin_problem(name, 1.0), {0.2, 0.1, 0.05, 0.025}, "quadratic");
        REQUIRE(report.rows.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& r = report.rows[i];
            CHECK(r.delta / r.h >= 8.0 - 1e-9);
            CHECK(r.n_boundary == 2);
            CHECK(r.wall_seconds >= 0.0);
            if (i > 0) {
                CHECK(r.delta < report.rows[i - 1].delta);
                CHECK(r.errors.h1_interior < report.rows[i - 1].errors.h1_interior);
            }
        }
    }
    const auto disk = convergence_study(builtin_problem("paraboloid2d"), {0.3, 0.2, 0.14}, "quadratic");
    for (std::size_t i = 1; i < disk.rows.size(); ++i) {
        CHECK(disk.rows[i].errors.h1_interior < disk.rows[i - 1].errors.h1_interior);
    }

    const auto quartic = convergence_study(builtin_problem("robin1d", 1.0), {0.2, 0.1, 0.05}, "quartic");
    CHECK(quartic.l2_flux.slope == doctest::Approx(1.0).epsilon(0.3));

    CHECK_THROWS_AS(convergence_study(builtin_problem("sine1d"), {0.1, 0.05}, "quadratic"), Error);
    CHECK_THROWS_AS(convergence_study(builtin_problem("sine1d"), {0.1, 0.2, 0.05}, "quadratic"), Error);
    try {
        StudyOptions o;
        o.solve.max_iterations = 1;
        convergence_study(builtin_problem("sine1d"), {0.2, 0.1, 0.05}, "quadratic", o);
        FAIL("expected non-convergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonConvergence);
        CHECK(std::string(e.what()).find("delta=0.2") == 0);
    }
}

TEST_CASE("eigen study") {
    const auto study = eigen_study({0.2, 0.1, 0.05}, 2, "quadratic");
    REQUIRE(study.rows.size() == 3);
    REQUIRE(study.slopes.size() == 2);
    for (const auto& r : study.rows) {
        CHECK(r.lambda[0] > 0.0);
        CHECK(r.lambda[1] > r.lambda[0]);
        CHECK(r.error[0] == doctest::Approx(std::abs(r.lambda[0] - pi * pi)));
    }
    for (std::size_t m = 0; m < 2; ++m) {
        CHECK(study.rows[2].overlap[m] > study.rows[0].overlap[m] - 1e-12);
        CHECK(study.rows[2].overlap[m] > 0.9999);
    }
    CHECK_THROWS_AS(eigen_study({0.2, 0.1, 0.05}, 4, "quadratic"), Error);
}

}  // TEST_SUITE
