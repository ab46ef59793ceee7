#include "nlpoisson/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlpoisson/error.hpp"

namespace nlpoisson {

const char* ladder_name(Ladder ladder) {
    switch (ladder) {
        case Ladder::R: return "R";
        case Ladder::Rbar: return "Rbar";
        case Ladder::Rbarbar: return "Rbarbar";
    }
    return "?";
}

KernelProfile::KernelProfile(std::string name, Fn R, Fn Rbar, Fn Rbarbar, Fn Rprime,
                             double gamma0)
    : name_(std::move(name)),
      R_(std::move(R)),
      Rbar_(std::move(Rbar)),
      Rbarbar_(std::move(Rbarbar)),
      Rprime_(std::move(Rprime)),
      gamma0_(gamma0) {
    if (!(gamma0_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kernel profile '" + name_ + "': gamma0 must be positive");
    }
}

double KernelProfile::eval(Ladder ladder, double r) const {
    switch (ladder) {
        case Ladder::R: return R_(r);
        case Ladder::Rbar: return Rbar_(r);
        case Ladder::Rbarbar: return Rbarbar_(r);
    }
    return 0.0;
}

namespace {

// (1 - r)^p on [0, 1], zero beyond.
double truncated_power(double r, int p) {
    if (r >= 1.0) return 0.0;
    return std::pow(1.0 - std::max(r, 0.0), p);
}

}  // namespace

KernelProfile make_quadratic_profile() {
    return KernelProfile(
        "quadratic",
        [](double r) { return truncated_power(r, 2); },
        [](double r) { return truncated_power(r, 3) / 3.0; },
        [](double r) { return truncated_power(r, 4) / 12.0; },
        [](double r) { return r >= 1.0 ? 0.0 : -2.0 * (1.0 - std::max(r, 0.0)); },
        0.25);
}

KernelProfile make_quartic_profile() {
    return KernelProfile(
        "quartic",
        [](double r) { return truncated_power(r, 4); },
        [](double r) { return truncated_power(r, 5) / 5.0; },
        [](double r) { return truncated_power(r, 6) / 30.0; },
        [](double r) { return r >= 1.0 ? 0.0 : -4.0 * truncated_power(r, 3); },
        1.0 / 16.0);
}

namespace {

struct HermiteTable {
    double step = 0.0;
    std::vector<double> value;
    std::vector<double> slope;

    double operator()(double r) const {
        if (r >= 1.0) return 0.0;
        r = std::max(r, 0.0);
        const auto last = static_cast<double>(value.size() - 1);
        const double pos = std::min(r / step, last);
        const auto m = std::min(static_cast<std::size_t>(pos), value.size() - 2);
        const double t = pos - static_cast<double>(m);
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * value[m] + (t3 - 2 * t2 + t) * step * slope[m] +
               (-2 * t3 + 3 * t2) * value[m + 1] + (t3 - t2) * step * slope[m + 1];
    }
};

}  // namespace

KernelProfile make_tabulated_profile(std::string name, KernelProfile::Fn R,
                                     KernelProfile::Fn Rprime, double gamma0,
                                     int grid_points) {
    if (grid_points < 2) {
        throw Error(ErrorCode::InvalidArgument, "tabulated profile needs at least two grid points");
    }
    const auto n = static_cast<std::size_t>(grid_points);
    const double step = 1.0 / static_cast<double>(n - 1);

    // 5-point Gauss-Legendre on each cell; R is C^1 on [0, 1] and smooth per cell.
    static constexpr std::array<double, 5> gl_x = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                   0.5384693101056831, 0.9061798459386640};
    static constexpr std::array<double, 5> gl_w = {0.2369268850561891, 0.4786286704993665,
                                                   0.5688888888888889, 0.4786286704993665,
                                                   0.2369268850561891};

    std::vector<double> r_vals(n), rbar(n, 0.0), rbarbar(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) r_vals[m] = R(static_cast<double>(m) * step);

    CompensatedSum acc;
    for (std::size_t m = n - 1; m-- > 0;) {
        const double a = static_cast<double>(m) * step;
        double cell = 0.0;
        for (std::size_t q = 0; q < gl_x.size(); ++q) {
            cell += gl_w[q] * R(a + 0.5 * step * (gl_x[q] + 1.0));
        }
        acc.add(0.5 * step * cell);
        rbar[m] = acc.value();
    }

    // Exact integral of the cubic Hermite interpolant of R̄ (slopes -R).
    CompensatedSum acc2;
    for (std::size_t m = n - 1; m-- > 0;) {
        const double f0 = rbar[m], f1 = rbar[m + 1];
        const double d0 = -r_vals[m], d1 = -r_vals[m + 1];
        acc2.add(step * (f0 + f1) / 2.0 + step * step * (d0 - d1) / 12.0);
        rbarbar[m] = acc2.value();
    }

    HermiteTable rbar_table{step, rbar, {}};
    rbar_table.slope.resize(n);
    for (std::size_t m = 0; m < n; ++m) rbar_table.slope[m] = -r_vals[m];

    HermiteTable rbarbar_table{step, rbarbar, {}};
    rbarbar_table.slope.resize(n);
    for (std::size_t m = 0; m < n; ++m) rbarbar_table.slope[m] = -rbar[m];

    auto R_support = [R](double r) { return r > 1.0 ? 0.0 : R(std::max(r, 0.0)); };
    auto Rp_support = [Rprime](double r) { return r > 1.0 ? 0.0 : Rprime(std::max(r, 0.0)); };
    return KernelProfile(std::move(name), R_support, std::move(rbar_table), std::move(rbarbar_table),
                         Rp_support, gamma0);
}

KernelProfile profile_by_name(const std::string& name) {
    if (name == "quadratic") return make_quadratic_profile();
    if (name == "quartic") return make_quartic_profile();
    throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + name + "' (expected quadratic|quartic)");
}

double unit_sphere_area(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "sphere dimension must be >= 1");
    const double half = 0.5 * n;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

// ∫_0^2 R̃(s^2/4) s^power ds by adaptive Gauss-Kronrod, relative tolerance 1e-10.
double radial_moment(const KernelProfile& profile, Ladder ladder, int power) {
    auto integrand = [&](double s) {
        return profile.eval(ladder, s * s / 4.0) * std::pow(s, power);
    };
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, 2.0, 20, 1e-10, &error);
    if (!std::isfinite(value) || !(value > 0.0) || error > 1e-10 * std::abs(value)) {
        throw Error(ErrorCode::Quadrature, "kernel profile '" + profile.name() +
                                               "': radial quadrature did not converge");
    }
    return value;
}

void check_dimension(int n) {
    if (n < 1 || n > 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
}

}  // namespace

double normalization_constant(const KernelProfile& profile, int n) {
    check_dimension(n);
    return 1.0 / (unit_sphere_area(n) * radial_moment(profile, Ladder::R, n - 1));
}

double volume_mass_constant(const KernelProfile& profile, Ladder ladder, int n, double alpha) {
    check_dimension(n);
    return alpha * unit_sphere_area(n) * radial_moment(profile, ladder, n - 1);
}

double surface_mass_constant(const KernelProfile& profile, Ladder ladder, int n, double alpha) {
    check_dimension(n);
    if (n == 1) return alpha * profile.eval(ladder, 0.0);
    return alpha * unit_sphere_area(n - 1) * radial_moment(profile, ladder, n - 2);
}

RescaledKernel::RescaledKernel(std::shared_ptr<const KernelProfile> profile, int dimension,
                               double delta)
    : profile_(std::move(profile)), dimension_(dimension), delta_(delta) {
    if (!profile_) throw Error(ErrorCode::InvalidArgument, "rescaled kernel needs a profile");
    check_dimension(dimension_);
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) {
        throw Error(ErrorCode::InvalidArgument, "delta must be positive and finite");
    }
    alpha_ = normalization_constant(*profile_, dimension_);
    c_delta_ = alpha_ * std::pow(delta_, -dimension_);
    inv_four_delta2_ = 1.0 / (4.0 * delta_ * delta_);
}

double RescaledKernel::eval_sq(Ladder ladder, double dist2) const {
    const double r = dist2 * inv_four_delta2_;
    if (r >= 1.0) return 0.0;
    return c_delta_ * profile_->eval(ladder, r);
}

double RescaledKernel::eval(Ladder ladder, const Point& x, const Point& y) const {
    return eval_sq(ladder, squared_distance(x, y));
}

Point RescaledKernel::grad_x(Ladder ladder, const Point& x, const Point& y) const {
    const Point d = x - y;
    const double r = dot(d, d) * inv_four_delta2_;
    if (r >= 1.0) return {0.0, 0.0, 0.0};
    double derivative = 0.0;
    switch (ladder) {
        case Ladder::R: derivative = profile_->Rprime(r); break;
        case Ladder::Rbar: derivative = -profile_->R(r); break;
        case Ladder::Rbarbar: derivative = -profile_->Rbar(r); break;
    }
    // d/dx R̃(|x-y|^2 / 4δ^2) = R̃'(r) (x - y) / (2δ^2)
    return (c_delta_ * derivative * 2.0 * inv_four_delta2_) * d;
}

const char* violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Negative: return "negative";
        case ViolationKind::Support: return "support";
        case ViolationKind::Nondegeneracy: return "nondegeneracy";
        case ViolationKind::LadderDerivative: return "ladder-derivative";
        case ViolationKind::Monotonicity: return "monotonicity";
    }
    return "?";
}

bool AssumptionReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const AssumptionViolation& v) { return v.kind == kind; });
}

AssumptionReport verify_assumptions(const KernelProfile& profile) {
    constexpr int intervals = 10000;
    constexpr double fd_step = 1e-5;
    constexpr double fd_rel_tol = 1e-6;
    // Relative errors are measured against max(|exact|, |fd|, floor) so that the
    // vanishing tail near r = 1 does not turn roundoff into violations.
    constexpr double fd_floor = 1e-3;

    AssumptionReport report;
    report.samples = intervals + 1;
    auto flag = [&](ViolationKind kind, Ladder ladder, double r, double value) {
        report.violations.push_back({kind, ladder, r, value});
    };

    constexpr std::array<Ladder, 3> ladders = {Ladder::R, Ladder::Rbar, Ladder::Rbarbar};
    std::array<double, 3> previous = {0.0, 0.0, 0.0};
    for (int m = 0; m <= intervals; ++m) {
        const double r = 2.0 * m / static_cast<double>(intervals);
        for (std::size_t l = 0; l < ladders.size(); ++l) {
            const double value = profile.eval(ladders[l], r);
            if (!(value >= 0.0)) flag(ViolationKind::Negative, ladders[l], r, value);
            const bool outside = ladders[l] == Ladder::R ? r > 1.0 : r >= 1.0;
            if (outside && value != 0.0) flag(ViolationKind::Support, ladders[l], r, value);
            if (l > 0 && m > 0 && value > previous[l] + 1e-15) {
                flag(ViolationKind::Monotonicity, ladders[l], r, value);
            }
            previous[l] = value;
        }
        const double R = profile.R(r);
        if (r <= 0.5 && R < profile.gamma0() * (1.0 - 1e-12)) {
            flag(ViolationKind::Nondegeneracy, Ladder::R, r, R);
        }
        if (r >= fd_step && std::abs(r - 1.0) > 2.0 * fd_step) {
            const double fd_bar = (profile.Rbar(r + fd_step) - profile.Rbar(r - fd_step)) / (2 * fd_step);
            const double fd_barbar =
                (profile.Rbarbar(r + fd_step) - profile.Rbarbar(r - fd_step)) / (2 * fd_step);
            const double Rbar = profile.Rbar(r);
            auto mismatch = [&](double fd, double exact) {
                const double scale = std::max({std::abs(exact), std::abs(fd), fd_floor});
                return std::abs(fd + exact) > fd_rel_tol * scale;
            };
            if (mismatch(fd_bar, R)) flag(ViolationKind::LadderDerivative, Ladder::Rbar, r, fd_bar);
            if (mismatch(fd_barbar, Rbar)) {
                flag(ViolationKind::LadderDerivative, Ladder::Rbarbar, r, fd_barbar);
            }
        }
    }
    return report;
}

}  // namespace nlpoisson
