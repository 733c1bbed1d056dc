#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "npl/problem.hpp"

namespace npl {

struct Trajectory;

struct EnergyBreakdown {
    double kinetic = 0.0;      // (1/2) sum sigma_k c_k^2
    double potential = 0.0;    // Phi(u)
    double total = 0.0;        // kinetic - potential
    double local_term = 0.0;   // int |u|^{r} / r with r = p+1 or q+1 (power and SPS)
    double interaction = 0.0;  // I(u) for SPS, 0 otherwise
};

// Requires u to be resolved by the basis (ResolutionError otherwise).
EnergyBreakdown energy(const ProblemSpec& problem, const SpectralBasis& basis, const Field& u);

// Same, from Galerkin coefficients c with u = synthesis(c).
EnergyBreakdown energy(const ProblemSpec& problem, const SpectralBasis& basis,
                       std::span<const double> coefficients, const Field& u);

// |E_{i+1} - E_i + int_{t_i}^{t_{i+1}} |u_t|^2| / (|E_i| + 1).
double dissipation_residual(const Trajectory& traj, std::size_t i);

// Identities for the SPS problem u_t - Laplace u + u = |u|^{q-1} u - lambda v[u^2] u on
// the n = 3 ball. Gradients use fourth-order finite differences; residuals are
// normalised by max(1, largest term).
//
// Pohozaev (multiplier x . grad u):
//   (1/2) int |grad u|^2 + (3/2) |u|_2^2 - 3 w/(q+1) + (5/4) lambda I
//     = int u_t x . grad u - (1/2) int_{|x|=R} |du/dnu|^2 x . nu
double pohozaev_residual(const Field& u, const Field& u_t, double q, double lambda);

// Multiplier u:  int u u_t = -|u|_{1,2}^2 + w - lambda I.
double multiplier_identity_residual(const Field& u, const Field& u_t, double q, double lambda);

// Constant of int u_t x . grad u <= eps |u|_{1,2}^2 + C |u_t|_2^2 with
// eps = (q-2)/12 on the ball of radius R: C = max(R^2, 1) / (4 eps).
double combined_inequality_constant(double q, double radius);

// Returns (lhs, rhs) with
//   lhs = (q-2)/4 |u|_{1,2}^2 + (q-2)/(q+1) w + (q-2)/4 lambda I,
//   rhs = 3 C(q) |u_t|_2^2 + (q+1) E(u).
std::pair<double, double> combined_inequality_check(const Field& u, const Field& u_t, double q,
                                                    double lambda);

// Fourth-order derivative along the grid coordinate (zero at r = 0 on balls).
Field gradient_fd4(const Field& f);

// Outward normal derivative at the outer boundary, fourth-order one-sided.
double boundary_normal_derivative(const Field& f);

}  // namespace npl
