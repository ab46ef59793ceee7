#include "nlpoisson/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlpoisson/error.hpp"
#include "nlpoisson/neighbors.hpp"

namespace nlpoisson {

namespace {
constexpr double pi = std::numbers::pi;
}

const char* domain_kind_name(DomainKind kind) {
    return kind == DomainKind::Interval ? "interval" : "disk";
}

DomainQuadrature interval_domain(int N) {
    if (N < 4) {
        throw Error(ErrorCode::InvalidResolution,
                    "interval resolution must be >= 4 (got " + std::to_string(N) + ")");
    }
    DomainQuadrature d;
    d.kind = DomainKind::Interval;
    d.dimension = 1;
    d.resolution = N;
    const double h = 1.0 / N;
    d.interior_nodes.reserve(N);
    for (int i = 0; i < N; ++i) {
        d.interior_nodes.push_back({(i + 0.5) * h, 0.0, 0.0});
        d.interior_weights.push_back(h);
    }
    d.boundary_nodes = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    d.boundary_weights = {1.0, 1.0};
    d.boundary_normals = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    d.mesh_size_h = h;
    d.measure = 1.0;
    d.boundary_measure = 2.0;
    d.diameter = 1.0;
    return d;
}

DomainQuadrature disk_domain(int rings) {
    if (rings < 3) {
        throw Error(ErrorCode::InvalidResolution,
                    "disk ring count must be >= 3 (got " + std::to_string(rings) + ")");
    }
    DomainQuadrature d;
    d.kind = DomainKind::Disk;
    d.dimension = 2;
    d.resolution = rings;
    const double M = rings;
    for (int k = 1; k <= rings; ++k) {
        const double radius = (k - 0.5) / M;
        const int count = static_cast<int>(std::ceil(2.0 * pi * radius * M));
        const double annulus = pi * (static_cast<double>(k) * k - static_cast<double>(k - 1) * (k - 1)) / (M * M);
        for (int l = 0; l < count; ++l) {
            const double theta = 2.0 * pi * (l + 0.5) / count;
            d.interior_nodes.push_back({radius * std::cos(theta), radius * std::sin(theta), 0.0});
            d.interior_weights.push_back(annulus / count);
        }
    }
    const int nb = static_cast<int>(std::ceil(2.0 * pi * M));
    for (int j = 0; j < nb; ++j) {
        const double theta = 2.0 * pi * (j + 0.5) / nb;
        const Point s = {std::cos(theta), std::sin(theta), 0.0};
        d.boundary_nodes.push_back(s);
        d.boundary_weights.push_back(2.0 * pi / nb);
        d.boundary_normals.push_back(s);
    }
    d.mesh_size_h = CellGrid::max_nearest_neighbor_distance(d.interior_nodes, 2);
    d.measure = pi;
    d.boundary_measure = 2.0 * pi;
    d.diameter = 2.0;
    return d;
}

DomainQuadrature make_domain(DomainKind kind, int resolution) {
    return kind == DomainKind::Interval ? interval_domain(resolution) : disk_domain(resolution);
}

int resolution_for(DomainKind kind, double delta, double ratio) {
    if (!(delta > 0.0) || !(ratio > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "delta and coupling ratio must be positive");
    }
    // Both generators have h <= 1/resolution.
    const int n = static_cast<int>(std::ceil(ratio / delta - 1e-9));
    return std::max(n, kind == DomainKind::Interval ? 4 : 3);
}

namespace {

ManufacturedProblem sine1d() {
    ManufacturedProblem p;
    p.name = "sine1d";
    p.u_exact = [](const Point& x) { return std::sin(pi * x[0]); };
    p.grad_u_exact = [](const Point& x) { return Point{pi * std::cos(pi * x[0]), 0.0, 0.0}; };
    p.hessian_u_exact = [](const Point& x) {
        return std::array<Point, 3>{Point{-pi * pi * std::sin(pi * x[0]), 0.0, 0.0}, Point{}, Point{}};
    };
    p.f = [](const Point& x) { return pi * pi * std::sin(pi * x[0]); };
    p.b = [](const Point&) { return 0.0; };
    return p;
}

ManufacturedProblem paraboloid2d() {
    ManufacturedProblem p;
    p.name = "paraboloid2d";
    p.domain = DomainKind::Disk;
    p.dimension = 2;
    p.u_exact = [](const Point& x) { return 1.0 - x[0] * x[0] - x[1] * x[1]; };
    p.grad_u_exact = [](const Point& x) { return Point{-2.0 * x[0], -2.0 * x[1], 0.0}; };
    p.hessian_u_exact = [](const Point&) {
        return std::array<Point, 3>{Point{-2.0, 0.0, 0.0}, Point{0.0, -2.0, 0.0}, Point{}};
    };
    p.f = [](const Point&) { return 4.0; };
    p.b = [](const Point&) { return 0.0; };
    return p;
}

ManufacturedProblem robin1d(double mu) {
    if (!(mu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "Robin parameter mu must be >= 0");
    ManufacturedProblem p;
    p.name = "robin1d";
    p.boundary = BoundaryCondition::robin(mu);
    p.u_exact = [mu](const Point& x) { return x[0] * (1.0 - x[0]) + mu; };
    p.grad_u_exact = [](const Point& x) { return Point{1.0 - 2.0 * x[0], 0.0, 0.0}; };
    p.hessian_u_exact = [](const Point&) {
        return std::array<Point, 3>{Point{-2.0, 0.0, 0.0}, Point{}, Point{}};
    };
    p.f = [](const Point&) { return 2.0; };
    p.b = [](const Point&) { return 0.0; };
    return p;
}

ManufacturedProblem zero1d() {
    ManufacturedProblem p;
    p.name = "zero1d";
    p.u_exact = [](const Point&) { return 0.0; };
    p.grad_u_exact = [](const Point&) { return Point{}; };
    p.hessian_u_exact = [](const Point&) { return std::array<Point, 3>{}; };
    p.f = [](const Point&) { return 0.0; };
    p.b = [](const Point&) { return 0.0; };
    return p;
}

}  // namespace

ManufacturedProblem builtin_problem(const std::string& name, double mu) {
    ManufacturedProblem p;
    if (name == "sine1d") {
        p = sine1d();
    } else if (name == "paraboloid2d") {
        p = paraboloid2d();
    } else if (name == "robin1d") {
        p = robin1d(mu);
    } else if (name == "zero1d") {
        p = zero1d();
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown problem '" + name + "'");
    }
    auto grad = p.grad_u_exact;
    p.flux_exact = [grad](const Point& s, const Point& n) { return dot(grad(s), n); };
    return p;
}

std::vector<std::string> builtin_problem_names() {
    return {"sine1d", "paraboloid2d", "robin1d", "zero1d"};
}

std::size_t KernelMassReport::violations() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const MassRow& r) { return r.violation; }));
}

KernelMassReport kernel_mass_report(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                    double tolerance) {
    if (kernel.dimension() != domain.dimension) {
        throw Error(ErrorCode::InvalidArgument, "kernel dimension does not match the domain");
    }
    constexpr std::array<Ladder, 3> ladders = {Ladder::R, Ladder::Rbar, Ladder::Rbarbar};
    const int n = domain.dimension;
    const double delta = kernel.delta();

    KernelMassReport report;
    report.delta = delta;
    report.tolerance = tolerance;
    for (std::size_t l = 0; l < 3; ++l) {
        report.c1[l] = volume_mass_constant(kernel.profile(), ladders[l], n, kernel.alpha());
        report.c2[l] = surface_mass_constant(kernel.profile(), ladders[l], n, kernel.alpha());
    }

    const CellGrid interior_grid(domain.interior_nodes, n, kernel.support_radius());
    const CellGrid boundary_grid(domain.boundary_nodes, n, kernel.support_radius());
    std::vector<std::size_t> near;

    auto measure = [&](NodeKind kind, std::size_t index, const Point& x) {
        MassRow row{kind, index, x, {}, {}, false};
        interior_grid.query(x, kernel.support_radius(), near);
        for (std::size_t l = 0; l < 3; ++l) {
            CompensatedSum acc;
            for (std::size_t k : near) {
                acc.add(kernel.eval(ladders[l], x, domain.interior_nodes[k]) * domain.interior_weights[k]);
            }
            row.interior_mass[l] = acc.value();
        }
        boundary_grid.query(x, kernel.support_radius(), near);
        for (std::size_t l = 0; l < 3; ++l) {
            CompensatedSum acc;
            for (std::size_t j : near) {
                acc.add(kernel.eval(ladders[l], x, domain.boundary_nodes[j]) * domain.boundary_weights[j]);
            }
            row.boundary_mass[l] = acc.value();
        }
        for (std::size_t l = 0; l < 3; ++l) {
            const double c1 = report.c1[l];
            const double c2 = report.c2[l] / delta;
            const double m_in = row.interior_mass[l];
            const double m_bd = row.boundary_mass[l];
            if (!(m_in > c1 / 3.0 * (1.0 - tolerance)) || m_in > c1 * (1.0 + tolerance)) row.violation = true;
            if (m_bd > c2 * (1.0 + tolerance)) row.violation = true;
            if (kind == NodeKind::Boundary && !(m_bd > c2 / 3.0 * (1.0 - tolerance))) row.violation = true;
        }
        report.rows.push_back(row);
    };

    for (std::size_t i = 0; i < domain.n_interior(); ++i) {
        measure(NodeKind::Interior, i, domain.interior_nodes[i]);
    }
    for (std::size_t j = 0; j < domain.n_boundary(); ++j) {
        measure(NodeKind::Boundary, j, domain.boundary_nodes[j]);
    }
    return report;
}

}  // namespace nlpoisson
