#pragma once

#include <vector>

#include "npl/integrate.hpp"

namespace npl {

struct SteadyState {
    Field u;
    std::vector<double> coefficients;
    double residual = 0.0;  // |A u - F(u)| in coefficient space
    int iterations = 0;
    bool converged = false;
};

// Damped Newton on the Galerkin system sigma c = N(c), finite-difference
// Jacobian, dense LU.
SteadyState newton_steady_state(const ProblemSpec& problem, const Field& guess, double tol = 1e-11,
                                int max_iterations = 40);

/**
 * Mountain-pass steady state by shooting in amplitude: bisects a in
 * [lo, hi] on the decay/blow-up outcome of evolve(a * shape), takes the
 * sample of the last decaying run with the smallest |u_t|, and polishes it
 * with Newton.
 */
SteadyState threshold_steady_state(const ProblemSpec& problem, const Field& shape, double lo, double hi,
                                   const StepperConfig& config, int bisections = 30);

}  // namespace npl
