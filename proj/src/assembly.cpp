#include "nlpoisson/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlpoisson/error.hpp"
#include "nlpoisson/neighbors.hpp"

namespace nlpoisson {

const char* formulation_name(Formulation f) {
    return f == Formulation::Coupled ? "coupled" : "eliminated";
}

namespace {

struct Entry {
    SparseMatrix::StorageIndex col;
    double value;
};

// Builds a compressed row-major matrix from a row generator. The generator is
// called twice per row (count, then fill) and must emit columns in increasing
// order. Rows are independent, so both passes run in parallel.
template <class RowFn>
SparseMatrix build_rows(Eigen::Index rows, Eigen::Index cols, RowFn&& row_fn) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(rows) + 1, 0);
#pragma omp parallel
    {
        std::vector<Entry> buffer;
#pragma omp for schedule(dynamic, 64)
        for (Eigen::Index i = 0; i < rows; ++i) {
            buffer.clear();
            row_fn(i, buffer);
            counts[static_cast<std::size_t>(i) + 1] = buffer.size();
        }
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(rows); ++i) counts[i + 1] += counts[i];

    SparseMatrix A(rows, cols);
    A.resizeNonZeros(static_cast<Eigen::Index>(counts.back()));
    auto* outer = A.outerIndexPtr();
    for (std::size_t i = 0; i <= static_cast<std::size_t>(rows); ++i) {
        outer[i] = static_cast<SparseMatrix::StorageIndex>(counts[i]);
    }
    auto* inner = A.innerIndexPtr();
    auto* values = A.valuePtr();
#pragma omp parallel
    {
        std::vector<Entry> buffer;
#pragma omp for schedule(dynamic, 64)
        for (Eigen::Index i = 0; i < rows; ++i) {
            buffer.clear();
            row_fn(i, buffer);
            std::size_t pos = counts[static_cast<std::size_t>(i)];
            for (const auto& e : buffer) {
                inner[pos] = e.col;
                values[pos] = e.value;
                ++pos;
            }
        }
    }
    return A;
}

// Shared neighbour structures for one (domain, kernel) pair.
struct Neighborhoods {
    const DomainQuadrature& domain;
    const RescaledKernel& kernel;
    CellGrid interior;
    CellGrid boundary;

    Neighborhoods(const DomainQuadrature& d, const RescaledKernel& k)
        : domain(d),
          kernel(k),
          interior(d.interior_nodes, d.dimension, k.support_radius()),
          boundary(d.boundary_nodes, d.dimension, k.support_radius()) {}

    void interior_near(const Point& x, std::vector<std::size_t>& out) const {
        interior.query(x, kernel.support_radius(), out);
    }
    void boundary_near(const Point& x, std::vector<std::size_t>& out) const {
        boundary.query(x, kernel.support_radius(), out);
    }
};

template <class Fn>
void parallel_nodes(std::size_t count, Fn&& fn) {
#pragma omp parallel
    {
        std::vector<std::size_t> near;
#pragma omp for schedule(dynamic, 64)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
            fn(static_cast<std::size_t>(i), near);
        }
    }
}

WeightFields weight_fields(const Neighborhoods& nb, const BoundaryCondition& boundary) {
    const auto& domain = nb.domain;
    const auto& kernel = nb.kernel;
    const double delta = kernel.delta();
    WeightFields wf;
    wf.w.resize(domain.n_interior());
    wf.wbar_interior.resize(domain.n_interior());
    wf.wbar_boundary.resize(domain.n_boundary());
    wf.wbarbar.resize(domain.n_boundary());
    wf.what.resize(domain.n_boundary());

    parallel_nodes(domain.n_interior(), [&](std::size_t i, std::vector<std::size_t>& near) {
        nb.interior_near(domain.interior_nodes[i], near);
        CompensatedSum w, wbar;
        for (std::size_t k : near) {
            const double d2 = squared_distance(domain.interior_nodes[i], domain.interior_nodes[k]);
            w.add(kernel.eval_sq(Ladder::R, d2) * domain.interior_weights[k]);
            wbar.add(kernel.eval_sq(Ladder::Rbar, d2) * domain.interior_weights[k]);
        }
        wf.w[i] = w.value();
        wf.wbar_interior[i] = wbar.value();
    });

    parallel_nodes(domain.n_boundary(), [&](std::size_t j, std::vector<std::size_t>& near) {
        const Point& s = domain.boundary_nodes[j];
        nb.interior_near(s, near);
        CompensatedSum wbar;
        for (std::size_t k : near) {
            wbar.add(kernel.eval(Ladder::Rbar, s, domain.interior_nodes[k]) * domain.interior_weights[k]);
        }
        nb.boundary_near(s, near);
        CompensatedSum wbarbar;
        for (std::size_t l : near) {
            wbarbar.add(kernel.eval(Ladder::Rbarbar, s, domain.boundary_nodes[l]) * domain.boundary_weights[l]);
        }
        wf.wbar_boundary[j] = wbar.value();
        wf.wbarbar[j] = wbarbar.value();
    });

    wf.wbarbar_floor =
        surface_mass_constant(kernel.profile(), Ladder::Rbarbar, domain.dimension, kernel.alpha()) /
        (6.0 * delta);
    for (std::size_t j = 0; j < domain.n_boundary(); ++j) {
        if (!(wf.wbarbar[j] > wf.wbarbar_floor)) {
            std::ostringstream msg;
            msg << "boundary weight w_barbar=" << wf.wbarbar[j] << " at boundary node " << j
                << " is below the floor " << wf.wbarbar_floor << " (ill-resolved boundary)";
            throw Error(ErrorCode::Assembly, msg.str());
        }
        wf.what[j] = boundary.is_robin()
                         ? wf.wbarbar[j] + boundary.mu / (2.0 * delta * delta) * wf.wbar_boundary[j]
                         : wf.wbarbar[j];
    }
    return wf;
}

std::vector<double> sample(const ScalarField& field, const std::vector<Point>& nodes) {
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = field(nodes[i]);
    return out;
}

// Fills everything of the eliminated formulation.
NonlocalSystem build_eliminated(const Neighborhoods& nb, const ModelParams& params,
                                const ManufacturedProblem& problem) {
    const auto& domain = nb.domain;
    const auto& kernel = nb.kernel;
    const double delta = params.delta;
    const double inv_d2 = 1.0 / (delta * delta);
    const auto n_in = domain.n_interior();
    const auto n_bd = domain.n_boundary();

    NonlocalSystem sys;
    sys.params = params;
    sys.n_interior = n_in;
    sys.n_boundary = n_bd;
    sys.weights = weight_fields(nb, params.boundary);
    const auto& w = domain.interior_weights;

    sys.interior = build_rows(
        static_cast<Eigen::Index>(n_in), static_cast<Eigen::Index>(n_in),
        [&](Eigen::Index row, std::vector<Entry>& out) {
            thread_local std::vector<std::size_t> near;
            const auto i = static_cast<std::size_t>(row);
            nb.interior_near(domain.interior_nodes[i], near);
            CompensatedSum diag;
            std::size_t diag_pos = 0;
            for (std::size_t k : near) {
                if (k == i) {
                    diag_pos = out.size();
                    out.push_back({static_cast<SparseMatrix::StorageIndex>(k), 0.0});
                    continue;
                }
                const double Rik = kernel.eval(Ladder::R, domain.interior_nodes[i], domain.interior_nodes[k]);
                const double product = Rik * (w[i] * w[k]);
                diag.add(product);
                out.push_back({static_cast<SparseMatrix::StorageIndex>(k), -inv_d2 * product});
            }
            out[diag_pos].value = inv_d2 * diag.value();
        });

    sys.coupling = build_rows(
        static_cast<Eigen::Index>(n_in), static_cast<Eigen::Index>(n_bd),
        [&](Eigen::Index row, std::vector<Entry>& out) {
            thread_local std::vector<std::size_t> near;
            const auto i = static_cast<std::size_t>(row);
            nb.boundary_near(domain.interior_nodes[i], near);
            for (std::size_t j : near) {
                const double Rbar = kernel.eval(Ladder::Rbar, domain.interior_nodes[i], domain.boundary_nodes[j]);
                out.push_back({static_cast<SparseMatrix::StorageIndex>(j), w[i] * Rbar});
            }
        });

    sys.boundary_scale.resize(static_cast<Eigen::Index>(n_bd));
    for (std::size_t j = 0; j < n_bd; ++j) {
        sys.boundary_scale[static_cast<Eigen::Index>(j)] =
            domain.boundary_weights[j] * inv_d2 / sys.weights.what[j];
    }

    const auto f = sample(problem.f, domain.interior_nodes);
    Vector smoothed_source(static_cast<Eigen::Index>(n_in));
    parallel_nodes(n_in, [&](std::size_t i, std::vector<std::size_t>& near) {
        nb.interior_near(domain.interior_nodes[i], near);
        CompensatedSum acc;
        for (std::size_t k : near) {
            acc.add(kernel.eval(Ladder::Rbar, domain.interior_nodes[i], domain.interior_nodes[k]) * f[k] * w[k]);
        }
        smoothed_source[static_cast<Eigen::Index>(i)] = acc.value();
    });

    sys.boundary_source.resize(static_cast<Eigen::Index>(n_bd));
    sys.boundary_data.resize(static_cast<Eigen::Index>(n_bd));
    parallel_nodes(n_bd, [&](std::size_t j, std::vector<std::size_t>& near) {
        const Point& s = domain.boundary_nodes[j];
        nb.interior_near(s, near);
        CompensatedSum acc;
        for (std::size_t k : near) {
            acc.add(kernel.eval(Ladder::Rbarbar, s, domain.interior_nodes[k]) * f[k] * w[k]);
        }
        const auto jj = static_cast<Eigen::Index>(j);
        sys.boundary_source[jj] = acc.value();
        sys.boundary_data[jj] = params.boundary.is_robin() ? 0.0 : problem.b(s) * sys.weights.wbar_boundary[j];
    });

    // F̃ = W P f - G D (δ² F_bd - b w̄)
    Vector boundary_term = sys.boundary_scale.cwiseProduct(
        delta * delta * sys.boundary_source - sys.boundary_data);
    const Eigen::Map<const Vector> weights_vec(w.data(), static_cast<Eigen::Index>(n_in));
    sys.rhs = weights_vec.cwiseProduct(smoothed_source) - sys.coupling * boundary_term;
    return sys;
}

}  // namespace

void validate_params(const ModelParams& params, const DomainQuadrature& domain,
                     const RescaledKernel& kernel) {
    if (!(params.delta > 0.0) || !std::isfinite(params.delta)) {
        throw Error(ErrorCode::InvalidArgument, "delta must be positive and finite");
    }
    if (kernel.dimension() != domain.dimension) {
        throw Error(ErrorCode::InvalidArgument, "kernel dimension does not match the domain");
    }
    if (std::abs(kernel.delta() - params.delta) > 1e-14 * params.delta) {
        throw Error(ErrorCode::InvalidArgument, "kernel horizon differs from the model horizon");
    }
    if (params.boundary.is_robin() && !(params.boundary.mu >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Robin parameter mu must be >= 0");
    }
    if (2.0 * params.delta > domain.diameter) {
        std::ostringstream msg;
        msg << "horizon 2*delta=" << 2.0 * params.delta << " exceeds the domain diameter " << domain.diameter;
        throw Error(ErrorCode::Assembly, msg.str());
    }
    const double ratio = params.delta / domain.mesh_size_h;
    if (ratio < params.min_coupling_ratio * (1.0 - 1e-9)) {
        std::ostringstream msg;
        msg << "coupling rule violated: delta/h=" << ratio << " < " << params.min_coupling_ratio;
        throw Error(ErrorCode::Assembly, msg.str());
    }
}

WeightFields compute_weight_fields(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                   const BoundaryCondition& boundary) {
    const Neighborhoods nb(domain, kernel);
    return weight_fields(nb, boundary);
}

void NonlocalSystem::apply(const Vector& x, Vector& y) const {
    y.noalias() = interior * x;
    Vector t = coupling.transpose() * x;
    t.array() *= boundary_scale.array();
    y.noalias() += coupling * t;
}

Vector NonlocalSystem::apply(const Vector& x) const {
    Vector y(x.size());
    apply(x, y);
    return y;
}

Vector NonlocalSystem::diagonal() const {
    Vector d = interior.diagonal();
    for (Eigen::Index i = 0; i < coupling.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(coupling, i); it; ++it) {
            d[i] += it.value() * it.value() * boundary_scale[it.col()];
        }
    }
    return d;
}

SparseMatrix NonlocalSystem::materialize() const {
    const SparseMatrix scaled = coupling * boundary_scale.asDiagonal();
    SparseMatrix low_rank = scaled * SparseMatrix(coupling.transpose());
    SparseMatrix A = interior + low_rank;
    A.makeCompressed();
    return A;
}

Eigen::MatrixXd NonlocalSystem::to_dense() const { return Eigen::MatrixXd(materialize()); }

NonlocalSystem assemble_eliminated(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                   const ModelParams& params, const ManufacturedProblem& problem) {
    validate_params(params, domain, kernel);
    const Neighborhoods nb(domain, kernel);
    auto sys = build_eliminated(nb, params, problem);
    sys.params.formulation = Formulation::Eliminated;
    return sys;
}

NonlocalSystem assemble_coupled(const DomainQuadrature& domain, const RescaledKernel& kernel,
                                const ModelParams& params, const ManufacturedProblem& problem) {
    validate_params(params, domain, kernel);
    const Neighborhoods nb(domain, kernel);
    auto sys = build_eliminated(nb, params, problem);
    sys.params.formulation = Formulation::Coupled;

    const double delta = params.delta;
    const double inv_d2 = 1.0 / (delta * delta);
    const auto n_in = domain.n_interior();
    const auto n_bd = domain.n_boundary();
    const auto total = static_cast<Eigen::Index>(n_in + n_bd);
    const auto& w = domain.interior_weights;
    const auto& tau = domain.boundary_weights;

    sys.coupled_matrix = build_rows(total, total, [&](Eigen::Index row, std::vector<Entry>& out) {
        thread_local std::vector<std::size_t> near;
        const auto r = static_cast<std::size_t>(row);
        if (r < n_in) {
            // (1/δ²) Σ_k R_ik (u_i - u_k) w_k - 2 Σ_j R̄(x_i, s_j) v_j τ_j
            const Point& x = domain.interior_nodes[r];
            nb.interior_near(x, near);
            CompensatedSum diag;
            std::size_t diag_pos = 0;
            for (std::size_t k : near) {
                if (k == r) {
                    diag_pos = out.size();
                    out.push_back({static_cast<SparseMatrix::StorageIndex>(k), 0.0});
                    continue;
                }
                const double value = kernel.eval(Ladder::R, x, domain.interior_nodes[k]) * w[k];
                diag.add(value);
                out.push_back({static_cast<SparseMatrix::StorageIndex>(k), -inv_d2 * value});
            }
            out[diag_pos].value = inv_d2 * diag.value();
            nb.boundary_near(x, near);
            for (std::size_t j : near) {
                out.push_back({static_cast<SparseMatrix::StorageIndex>(n_in + j),
                               -2.0 * kernel.eval(Ladder::Rbar, x, domain.boundary_nodes[j]) * tau[j]});
            }
        } else {
            // -(1/δ²) Σ_k R̄(s_j, x_k) u_k w_k - 2 ŵ_j v_j
            const std::size_t j = r - n_in;
            const Point& s = domain.boundary_nodes[j];
            nb.interior_near(s, near);
            for (std::size_t k : near) {
                out.push_back({static_cast<SparseMatrix::StorageIndex>(k),
                               -inv_d2 * kernel.eval(Ladder::Rbar, s, domain.interior_nodes[k]) * w[k]});
            }
            out.push_back({static_cast<SparseMatrix::StorageIndex>(r), -2.0 * sys.weights.what[j]});
        }
    });

    Vector rhs(total);
    const auto f = sample(problem.f, domain.interior_nodes);
    parallel_nodes(n_in, [&](std::size_t i, std::vector<std::size_t>& near) {
        nb.interior_near(domain.interior_nodes[i], near);
        CompensatedSum acc;
        for (std::size_t k : near) {
            acc.add(kernel.eval(Ladder::Rbar, domain.interior_nodes[i], domain.interior_nodes[k]) * f[k] * w[k]);
        }
        rhs[static_cast<Eigen::Index>(i)] = acc.value();
    });
    for (std::size_t j = 0; j < n_bd; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        rhs[static_cast<Eigen::Index>(n_in) + jj] = sys.boundary_source[jj] - inv_d2 * sys.boundary_data[jj];
    }
    sys.coupled_rhs = std::move(rhs);
    return sys;
}

NonlocalSystem assemble(const DomainQuadrature& domain, const RescaledKernel& kernel,
                        const ModelParams& params, const ManufacturedProblem& problem) {
    return params.formulation == Formulation::Coupled ? assemble_coupled(domain, kernel, params, problem)
                                                      : assemble_eliminated(domain, kernel, params, problem);
}

Vector recover_flux(const Vector& u, const NonlocalSystem& system) {
    if (static_cast<std::size_t>(u.size()) != system.n_interior) {
        throw Error(ErrorCode::InvalidArgument, "flux recovery: u has the wrong length");
    }
    const double d2 = system.params.delta * system.params.delta;
    Vector smoothed = system.coupling.transpose() * u;
    Vector v(static_cast<Eigen::Index>(system.n_boundary));
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double what = system.weights.what[static_cast<std::size_t>(j)];
        if (!(what > system.weights.wbarbar_floor)) {
            throw Error(ErrorCode::Assembly, "flux recovery: boundary weight below floor");
        }
        v[j] = -(smoothed[j] + d2 * system.boundary_source[j] - system.boundary_data[j]) / (2.0 * d2 * what);
    }
    return v;
}

EigenSystem assemble_eigen(const DomainQuadrature& domain, const RescaledKernel& kernel,
                           const ModelParams& params) {
    if (params.boundary.is_robin()) {
        throw Error(ErrorCode::Unsupported, "the eigenproblem is only available with Dirichlet boundaries");
    }
    ManufacturedProblem homogeneous;
    homogeneous.name = "homogeneous";
    homogeneous.f = [](const Point&) { return 0.0; };
    homogeneous.b = [](const Point&) { return 0.0; };
    ModelParams p = params;
    p.formulation = Formulation::Eliminated;
    EigenSystem out{assemble_eliminated(domain, kernel, p, homogeneous), {}};

    const Neighborhoods nb(domain, kernel);
    const auto& w = domain.interior_weights;
    const auto n = static_cast<Eigen::Index>(domain.n_interior());
    out.mass = build_rows(n, n, [&](Eigen::Index row, std::vector<Entry>& entries) {
        thread_local std::vector<std::size_t> near;
        const auto i = static_cast<std::size_t>(row);
        nb.interior_near(domain.interior_nodes[i], near);
        for (std::size_t k : near) {
            const double Rbar = kernel.eval(Ladder::Rbar, domain.interior_nodes[i], domain.interior_nodes[k]);
            entries.push_back({static_cast<SparseMatrix::StorageIndex>(k), Rbar * (w[i] * w[k])});
        }
    });
    return out;
}

TruncationResiduals truncation_residuals(const ManufacturedProblem& problem,
                                         const DomainQuadrature& domain,
                                         const RescaledKernel& kernel, const ModelParams& params,
                                         bool with_boundary_layer) {
    validate_params(params, domain, kernel);
    if (with_boundary_layer && !problem.hessian_u_exact) {
        throw Error(ErrorCode::InvalidArgument,
                    "problem '" + problem.name + "' has no Hessian; boundary-layer residual unavailable");
    }
    const Neighborhoods nb(domain, kernel);
    const auto wf = weight_fields(nb, params.boundary);
    const double inv_d2 = 1.0 / (params.delta * params.delta);
    const auto& w = domain.interior_weights;
    const auto& tau = domain.boundary_weights;
    const auto u = sample(problem.u_exact, domain.interior_nodes);
    const auto f = sample(problem.f, domain.interior_nodes);
    std::vector<double> flux(domain.n_boundary());
    std::vector<Point> layer_field(domain.n_boundary());
    for (std::size_t j = 0; j < domain.n_boundary(); ++j) {
        const Point& s = domain.boundary_nodes[j];
        const Point& n = domain.boundary_normals[j];
        flux[j] = problem.flux_exact(s, n);
        if (with_boundary_layer) {
            // b(y) = Σ_m n^m ∇(∂_m u) = H(y) n
            const auto H = (*problem.hessian_u_exact)(s);
            layer_field[j] = n[0] * H[0] + n[1] * H[1] + n[2] * H[2];
        }
    }

    TruncationResiduals out;
    out.r_in.resize(domain.n_interior());
    out.r_bd.resize(domain.n_boundary());
    if (with_boundary_layer) out.r_bl.emplace(domain.n_interior(), 0.0);

    parallel_nodes(domain.n_interior(), [&](std::size_t i, std::vector<std::size_t>& near) {
        const Point& x = domain.interior_nodes[i];
        nb.interior_near(x, near);
        CompensatedSum diff, source;
        for (std::size_t k : near) {
            const double d2 = squared_distance(x, domain.interior_nodes[k]);
            diff.add(kernel.eval_sq(Ladder::R, d2) * (u[i] - u[k]) * w[k]);
            source.add(kernel.eval_sq(Ladder::Rbar, d2) * f[k] * w[k]);
        }
        nb.boundary_near(x, near);
        CompensatedSum flux_term, layer;
        for (std::size_t j : near) {
            const double Rbar = kernel.eval(Ladder::Rbar, x, domain.boundary_nodes[j]);
            flux_term.add(Rbar * flux[j] * tau[j]);
            if (with_boundary_layer) {
                layer.add(Rbar * dot(x - domain.boundary_nodes[j], layer_field[j]) * tau[j]);
            }
        }
        out.r_in[i] = inv_d2 * diff.value() - 2.0 * flux_term.value() - source.value();
        if (with_boundary_layer) (*out.r_bl)[i] = layer.value();
    });

    const bool robin = params.boundary.is_robin();
    const double mu = params.boundary.mu;
    parallel_nodes(domain.n_boundary(), [&](std::size_t j, std::vector<std::size_t>& near) {
        const Point& s = domain.boundary_nodes[j];
        const double bj = robin ? 0.0 : problem.b(s);
        nb.interior_near(s, near);
        CompensatedSum diff, source;
        for (std::size_t k : near) {
            const double d2 = squared_distance(s, domain.interior_nodes[k]);
            const double Rbar = kernel.eval_sq(Ladder::Rbar, d2);
            if (robin) {
                diff.add(-Rbar * (mu * flux[j] + u[k]) * w[k]);
            } else {
                diff.add(Rbar * (bj - u[k]) * w[k]);
            }
            source.add(kernel.eval_sq(Ladder::Rbarbar, d2) * f[k] * w[k]);
        }
        out.r_bd[j] = inv_d2 * diff.value() - 2.0 * wf.wbarbar[j] * flux[j] - source.value();
    });

    auto l2 = [](const std::vector<double>& r, const std::vector<double>& weights) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < r.size(); ++i) acc.add(weights[i] * r[i] * r[i]);
        return std::sqrt(acc.value());
    };
    out.l2_in = l2(out.r_in, w);
    out.l2_bd = l2(out.r_bd, tau);
    if (with_boundary_layer) {
        out.l2_bl = l2(*out.r_bl, w);
        std::vector<double> r_it(domain.n_interior());
        for (std::size_t i = 0; i < r_it.size(); ++i) r_it[i] = out.r_in[i] - (*out.r_bl)[i];
        out.l2_it = l2(r_it, w);
    }
    return out;
}

double relative_asymmetry(const SparseMatrix& A) {
    double worst = 0.0;
    double scale = 0.0;
    for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(A, i); it; ++it) {
            scale = std::max(scale, std::abs(it.value()));
            worst = std::max(worst, std::abs(it.value() - A.coeff(it.col(), i)));
        }
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace nlpoisson
