#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlpoisson/analysis.hpp"
#include "nlpoisson/error.hpp"
#include "nlpoisson/geometry.hpp"
#include "support.hpp"

using namespace nlpoisson;

namespace {

constexpr double pi = std::numbers::pi;

double weight_sum(const std::vector<double>& w) {
    CompensatedSum acc;
    for (double x : w) acc.add(x);
    return acc.value();
}

double integrate(const DomainQuadrature& d, const ScalarField& f) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < d.n_interior(); ++i) acc.add(f(d.interior_nodes[i]) * d.interior_weights[i]);
    return acc.value();
}

// Second-order central Laplacian.
double fd_laplacian(const ScalarField& u, const Point& x, int dim, double h) {
    double lap = 0.0;
    for (int d = 0; d < dim; ++d) {
        Point p = x, m = x;
        p[d] += h;
        m[d] -= h;
        lap += (u(p) - 2.0 * u(x) + u(m)) / (h * h);
    }
    return lap;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("interval quadrature") {
    const auto d = interval_domain(4);
    REQUIRE(d.n_interior() == 4);
    CHECK(d.interior_nodes[0][0] == 0.125);
    CHECK(d.interior_nodes[1][0] == 0.375);
    CHECK(d.interior_nodes[2][0] == 0.625);
    CHECK(d.interior_nodes[3][0] == 0.875);
    CHECK(weight_sum(d.interior_weights) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(weight_sum(d.boundary_weights) == 2.0);
    CHECK(d.boundary_normals[0][0] == -1.0);
    CHECK(d.boundary_normals[1][0] == 1.0);
    CHECK(interval_domain(100).mesh_size_h == doctest::Approx(0.01).epsilon(1e-14));
    try {
        interval_domain(3);
        FAIL("expected invalid resolution");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidResolution);
    }
}

TEST_CASE("disk quadrature") {
    for (int M : {3, 16, 40}) {
        const auto d = disk_domain(M);
        CHECK(std::abs(weight_sum(d.interior_weights) - pi) <= 1e-10 * pi);
        CHECK(std::abs(weight_sum(d.boundary_weights) - 2 * pi) <= 1e-10 * 2 * pi);
        for (std::size_t j = 0; j < d.n_boundary(); ++j) {
            CHECK(norm(d.boundary_normals[j]) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(norm(d.boundary_normals[j] - d.boundary_nodes[j]) <= 1e-15);
        }
        for (const auto& x : d.interior_nodes) CHECK(norm(x) < 1.0);
    }
    const auto d16 = disk_domain(16);
    INFO("h=" << d16.mesh_size_h);
    CHECK(d16.mesh_size_h <= 1.0 / 16.0 * (1.0 + 1e-9));
    CHECK(d16.mesh_size_h >= 0.5 / 16.0);
    CHECK_THROWS_AS(disk_domain(2), Error);
}

TEST_CASE("quadrature converges at second order") {
    std::vector<double> h, err;
    for (int N : {8, 16, 32, 64}) {
        const auto d = interval_domain(N);
        h.push_back(d.mesh_size_h);
        err.push_back(std::abs(integrate(d, [](const Point& x) { return std::sin(pi * x[0]); }) - 2.0 / pi));
    }
    CHECK(fit_slope(h, err).slope >= 1.8);

    h.clear();
    err.clear();
    for (int M : {8, 16, 32, 64}) {
        const auto d = disk_domain(M);
        h.push_back(d.mesh_size_h);
        err.push_back(std::abs(integrate(d, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; }) - pi / 2));
    }
    INFO("disk slope " << fit_slope(h, err).slope);
    CHECK(fit_slope(h, err).slope >= 1.8);
}

TEST_CASE("manufactured problems satisfy their equations") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& name : builtin_problem_names()) {
        const auto p = builtin_problem(name, 0.5);
        for (int t = 0; t < 100; ++t) {
            Point x{};
            if (p.dimension == 1) {
                x[0] = 0.01 + 0.98 * unit(rng);
            } else {
                const double r = 0.98 * std::sqrt(unit(rng)), th = 2 * pi * unit(rng);
                x = {r * std::cos(th), r * std::sin(th), 0};
            }
            const double f = p.f(x);
            const double lap = fd_laplacian(p.u_exact, x, p.dimension, 1e-3);
            CHECK(std::abs(-lap - f) <= 1e-5 * std::max(std::abs(f), 1.0));
        }
        const auto d = make_domain(p.domain, 8);
        for (std::size_t j = 0; j < d.n_boundary(); ++j) {
            const Point& s = d.boundary_nodes[j];
            const double flux = p.flux_exact(s, d.boundary_normals[j]);
            if (p.boundary.is_robin()) {
                CHECK(std::abs(p.u_exact(s) + p.boundary.mu * flux) <= 1e-12);
            } else {
                CHECK(std::abs(p.u_exact(s) - p.b(s)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("manufactured fluxes") {
    const auto sine = builtin_problem("sine1d");
    CHECK(sine.flux_exact({0, 0, 0}, {-1, 0, 0}) == doctest::Approx(-pi));
    CHECK(sine.flux_exact({1, 0, 0}, {1, 0, 0}) == doctest::Approx(-pi));
    const auto para = builtin_problem("paraboloid2d");
    const Point s = {std::cos(0.3), std::sin(0.3), 0};
    CHECK(para.flux_exact(s, s) == doctest::Approx(-2.0));
    const auto robin = builtin_problem("robin1d", 0.5);
    CHECK(robin.u_exact({0, 0, 0}) + 0.5 * robin.flux_exact({0, 0, 0}, {-1, 0, 0}) == doctest::Approx(0.0));
    CHECK(robin.flux_exact({1, 0, 0}, {1, 0, 0}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(builtin_problem("cube3d"), Error);
    CHECK_THROWS_AS(builtin_problem("robin1d", -1.0), Error);
}

TEST_CASE("kernel mass report") {
    const double delta = 0.1;
    const auto d = interval_domain(80);
    const auto k = testing::kernel(1, delta);
    const auto report = kernel_mass_report(d, k);
    CHECK(report.violations() == 0);
    CHECK(report.c1[0] == doctest::Approx(1.0).epsilon(1e-10));

    // Node at the centre: interior mass of R equals C1 = 1 up to quadrature error.
    const auto& centre = report.rows[39];
    REQUIRE(std::abs(centre.x[0] - 0.49375) < 1e-12);
    CHECK(centre.interior_mass[0] == doctest::Approx(1.0).epsilon(1e-3));
    // Boundary node: mass in (C1/3, C1].
    const auto& edge = report.rows[80];
    REQUIRE(edge.kind == NodeKind::Boundary);
    CHECK(edge.interior_mass[0] > report.c1[0] / 3.0);
    CHECK(edge.interior_mass[0] <= report.c1[0] * (1 + 1e-3));

    // Halving delta leaves the centre mass at C1.
    const auto finer = kernel_mass_report(interval_domain(160), testing::kernel(1, delta / 2));
    CHECK(finer.rows[79].interior_mass[0] == doctest::Approx(1.0).epsilon(1e-3));

    CHECK(kernel_mass_report(disk_domain(16), testing::kernel(2, 0.1)).violations() == 0);
}

}  // TEST_SUITE
