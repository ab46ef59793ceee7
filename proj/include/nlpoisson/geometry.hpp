#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlpoisson/kernels.hpp"
#include "nlpoisson/point.hpp"

namespace nlpoisson {

enum class DomainKind { Interval, Disk };

const char* domain_kind_name(DomainKind kind);

/// Quadrature description of a domain: interior nodes/weights and boundary
/// nodes/weights/outward normals.
struct DomainQuadrature {
    DomainKind kind = DomainKind::Interval;
    int dimension = 1;
    std::vector<Point> interior_nodes;
    std::vector<double> interior_weights;
    std::vector<Point> boundary_nodes;
    std::vector<double> boundary_weights;
    std::vector<Point> boundary_normals;
    /// Largest nearest-neighbour spacing among interior nodes.
    double mesh_size_h = 0.0;
    /// |Omega| and |dOmega| of the exact domain.
    double measure = 0.0;
    double boundary_measure = 0.0;
    double diameter = 0.0;
    int resolution = 0;

    std::size_t n_interior() const { return interior_nodes.size(); }
    std::size_t n_boundary() const { return boundary_nodes.size(); }
};

/// Omega = (0, 1): midpoint nodes, endpoints carry counting measure.
DomainQuadrature interval_domain(int N);

/// Unit disk: concentric-ring midpoint quadrature with M rings.
DomainQuadrature disk_domain(int rings);

DomainQuadrature make_domain(DomainKind kind, int resolution);

/// Smallest resolution whose mesh size satisfies h <= delta / ratio.
int resolution_for(DomainKind kind, double delta, double ratio);

struct BoundaryCondition {
    enum class Kind { Dirichlet, Robin } kind = Kind::Dirichlet;
    double mu = 0.0;

    static BoundaryCondition dirichlet() { return {Kind::Dirichlet, 0.0}; }
    static BoundaryCondition robin(double mu) { return {Kind::Robin, mu}; }
    bool is_robin() const { return kind == Kind::Robin; }
};

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;
using HessianField = std::function<std::array<Point, 3>(const Point&)>;

/// Exact solution of -Δu = f with its boundary data, for measuring errors.
struct ManufacturedProblem {
    std::string name;
    DomainKind domain = DomainKind::Interval;
    int dimension = 1;
    BoundaryCondition boundary;
    ScalarField u_exact;
    VectorField grad_u_exact;
    std::optional<HessianField> hessian_u_exact;
    ScalarField f;
    ScalarField b;
    /// ∂u/∂n at a boundary point with the given outward normal.
    std::function<double(const Point&, const Point&)> flux_exact;
};

/// Built-in catalog: "sine1d", "paraboloid2d", "robin1d" (uses mu), "zero1d".
ManufacturedProblem builtin_problem(const std::string& name, double mu = 1.0);

std::vector<std::string> builtin_problem_names();

enum class NodeKind { Interior, Boundary };

struct MassRow {
    NodeKind kind;
    std::size_t index;
    Point x;
    std::array<double, 3> interior_mass;  // indexed by Ladder
    std::array<double, 3> boundary_mass;
    bool violation = false;
};

struct KernelMassReport {
    double delta = 0.0;
    /// Full-space constants per ladder member.
    std::array<double, 3> c1{};
    std::array<double, 3> c2{};
    /// Relative slack granted to the bounds for quadrature and curvature error.
    double tolerance = 0.0;
    std::vector<MassRow> rows;

    std::size_t violations() const;
};

/// Relative slack used by kernel_mass_report when comparing quadrature masses
/// against the full-space constants.
inline constexpr double kMassBoundTolerance = 0.05;

/// Quadrature estimates of ∫_Ω R̃_δ(x,·) and ∫_∂Ω R̃_δ(x,·) at every node, with
/// bound checks C1/3 < ∫_Ω <= C1 (all nodes), ∫_∂Ω <= C2/δ (all nodes) and
/// C2/(3δ) < ∫_∂Ω (boundary nodes).
KernelMassReport kernel_mass_report(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                    double tolerance = kMassBoundTolerance);

}  // namespace nlpoisson
