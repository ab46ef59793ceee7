#pragma once

#include <memory>
#include <string>

#include "nlpoisson/assembly.hpp"
#include "nlpoisson/geometry.hpp"
#include "nlpoisson/kernels.hpp"

namespace testing {

inline std::shared_ptr<const nlpoisson::KernelProfile> profile(const std::string& name = "quadratic") {
    return std::make_shared<const nlpoisson::KernelProfile>(nlpoisson::profile_by_name(name));
}

inline nlpoisson::RescaledKernel kernel(int dimension, double delta, const std::string& name = "quadratic") {
    return nlpoisson::RescaledKernel(profile(name), dimension, delta);
}

inline nlpoisson::ModelParams params(double delta,
                                     nlpoisson::BoundaryCondition bc = nlpoisson::BoundaryCondition::dirichlet()) {
    nlpoisson::ModelParams p;
    p.delta = delta;
    p.boundary = bc;
    return p;
}

// Domain/kernel/params bundle at the default coupling ratio.
struct Setup {
    nlpoisson::ManufacturedProblem problem;
    nlpoisson::DomainQuadrature domain;
    nlpoisson::RescaledKernel kernel;
    nlpoisson::ModelParams params;
};

inline Setup setup(const std::string& problem_name, double delta, double mu = 1.0) {
    auto problem = nlpoisson::builtin_problem(problem_name, mu);
    auto domain = nlpoisson::make_domain(problem.domain, nlpoisson::resolution_for(problem.domain, delta, 8.0));
    auto k = kernel(domain.dimension, delta);
    auto p = params(delta, problem.boundary);
    return {std::move(problem), std::move(domain), std::move(k), p};
}

}  // namespace testing
