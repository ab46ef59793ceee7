#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nlpoisson/point.hpp"

namespace nlpoisson {

/// Members of the antiderivative ladder R, R̄ = ∫_r^∞ R, R̄̄ = ∫_r^∞ R̄.
enum class Ladder { R, Rbar, Rbarbar };

const char* ladder_name(Ladder ladder);

/// Radial kernel profile together with its tail-integral ladder.
///
/// The argument is the scaled squared distance r = |x - y|^2 / (4 delta^2); the
/// profile is supported on [0, 1].
class KernelProfile {
public:
    using Fn = std::function<double(double)>;

    KernelProfile(std::string name, Fn R, Fn Rbar, Fn Rbarbar, Fn Rprime, double gamma0);

    const std::string& name() const { return name_; }
    double gamma0() const { return gamma0_; }

    double R(double r) const { return R_(r); }
    double Rbar(double r) const { return Rbar_(r); }
    double Rbarbar(double r) const { return Rbarbar_(r); }
    double Rprime(double r) const { return Rprime_(r); }
    double eval(Ladder ladder, double r) const;

private:
    std::string name_;
    Fn R_, Rbar_, Rbarbar_, Rprime_;
    double gamma0_;
};

/// R(r) = (1 - r)^2 on [0, 1].
KernelProfile make_quadratic_profile();

/// R(r) = (1 - r)^4 on [0, 1].
KernelProfile make_quartic_profile();

/// Builds a profile whose ladder has no closed form: R̄ and R̄̄ are tabulated by
/// quadrature on a uniform grid over [0, 1] and evaluated by cubic Hermite
/// interpolation.
KernelProfile make_tabulated_profile(std::string name, KernelProfile::Fn R,
                                     KernelProfile::Fn Rprime, double gamma0,
                                     int grid_points = 4096);

/// Lookup by config name ("quadratic" | "quartic").
KernelProfile profile_by_name(const std::string& name);

/// Surface area of the unit sphere in R^n (S_1 = 2, S_2 = 2 pi, S_3 = 4 pi).
double unit_sphere_area(int n);

/// alpha_n with alpha_n * S_n * ∫_0^2 R(s^2/4) s^(n-1) ds = 1, i.e. the rescaled
/// R kernel integrates to one over R^n.
double normalization_constant(const KernelProfile& profile, int n);

/// Full-space mass of a rescaled ladder member: alpha_n S_n ∫_0^2 R̃(s^2/4) s^(n-1) ds.
double volume_mass_constant(const KernelProfile& profile, Ladder ladder, int n, double alpha);

/// Mass of a rescaled ladder member over a flat hyperplane through x, times delta.
/// For n = 1 the hyperplane is a point and this is alpha * R̃(0).
double surface_mass_constant(const KernelProfile& profile, Ladder ladder, int n, double alpha);

/// R̃_delta(x, y) = alpha_n delta^-n R̃(|x - y|^2 / (4 delta^2)).
class RescaledKernel {
public:
    RescaledKernel(std::shared_ptr<const KernelProfile> profile, int dimension, double delta);

    const KernelProfile& profile() const { return *profile_; }
    std::shared_ptr<const KernelProfile> profile_ptr() const { return profile_; }
    int dimension() const { return dimension_; }
    double delta() const { return delta_; }
    double alpha() const { return alpha_; }
    double c_delta() const { return c_delta_; }
    /// Interaction radius 2 delta.
    double support_radius() const { return 2.0 * delta_; }

    double eval(Ladder ladder, const Point& x, const Point& y) const;
    /// Same as eval() but from a precomputed squared distance.
    double eval_sq(Ladder ladder, double dist2) const;

    /// Gradient in x. Only R and R̄ are supported (R' is part of the profile, R̄' = -R).
    Point grad_x(Ladder ladder, const Point& x, const Point& y) const;

private:
    std::shared_ptr<const KernelProfile> profile_;
    int dimension_;
    double delta_;
    double alpha_;
    double c_delta_;
    double inv_four_delta2_;
};

enum class ViolationKind { Negative, Support, Nondegeneracy, LadderDerivative, Monotonicity };

const char* violation_name(ViolationKind kind);

struct AssumptionViolation {
    ViolationKind kind;
    Ladder ladder;
    double r;
    double value;
};

struct AssumptionReport {
    std::vector<AssumptionViolation> violations;
    int samples = 0;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
};

/// Samples [0, 2] on 10^4 intervals and checks nonnegativity, compact support,
/// the nondegeneracy floor on [0, 1/2], ladder monotonicity and the ladder
/// derivative relations by central differences.
AssumptionReport verify_assumptions(const KernelProfile& profile);

}  // namespace nlpoisson
