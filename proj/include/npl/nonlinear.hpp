#pragma once

#include "npl/grid.hpp"

namespace npl {

/**
 * Nonlinearity F(u) and its potential Phi with F = grad Phi.
 *
 *   Power(p):            F = |u|^{p-1} u,                      Phi = int |u|^{p+1} / (p+1)
 *   Choquard(p, n):      F = v[|u|^p] |u|^{p-2} u,             Phi = int v[|u|^p] |u|^p / (2p)
 *   Sps(q, lambda, -/+): F = |u|^{q-1} u -/+ lambda v[u^2] u,  Phi = int |u|^{q+1}/(q+1) -/+ lambda I / 4
 *
 * v[f] is the Newton potential of f, I = int v[u^2] u^2.
 */
struct NonlinearitySpec {
    enum class Kind { Power, Choquard, Sps };
    enum class Sign { Minus, Plus };

    Kind kind = Kind::Power;
    double p = 3.0;       // Power and Choquard exponent
    int n = 3;            // Choquard kernel dimension
    double q = 3.0;       // SPS local exponent
    double lambda = 1.0;  // SPS coupling
    Sign sign = Sign::Minus;

    static NonlinearitySpec power(double p);
    static NonlinearitySpec choquard(double p, int n = 3);
    static NonlinearitySpec sps(double q, double lambda, Sign sign = Sign::Minus);

    void validate() const;
    // Exponent d of the self-similar blow-up rate (T-t)^{-1/(d-1)}; sets the step-size law.
    // Nonlocal terms scale like the power p = 2 under parabolic rescaling.
    double growth_degree() const;
    // Exponent r of the L_r norm tracked in trajectories (p+1 or q+1).
    double tracked_lebesgue_exponent() const;
    bool operator==(const NonlinearitySpec&) const = default;
};

// Magnitudes beyond this are treated as blow-up rather than evaluated.
inline constexpr double overflow_threshold = 1e12;

Field eval_F(const NonlinearitySpec& spec, const Field& u);
double eval_potential(const NonlinearitySpec& spec, const Field& u);

// I(u) = int v[u^2] u^2 on the n = 3 ball.
double interaction_integral(const Field& u);

// Central-difference check of F = grad Phi in direction h.
double gradient_check(const NonlinearitySpec& spec, const Field& u, const Field& h, double eps);

}  // namespace npl
