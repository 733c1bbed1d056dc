#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npl/energy.hpp"
#include "npl/problem.hpp"

namespace npl {

struct StepperConfig {
    enum class Scheme { Etd1, Etd2rk };

    double dt0 = 1e-3;
    double t_end = 1.0;
    double blowup_cap = 1e8;
    double safety = 1.0;  // multiplies the adaptive step
    std::size_t record_every = 1;
    Scheme scheme = Scheme::Etd2rk;
    bool store_fields = false;    // keep a snapshot per recorded sample
    std::size_t max_steps = 50'000'000;

    void validate() const;
    bool operator==(const StepperConfig&) const = default;
};

struct Outcome {
    enum class Kind { GlobalToTend, BlowupSuspected, DecayedToZero };
    Kind kind = Kind::GlobalToTend;
    double T_est = 0.0;  // meaningful for BlowupSuspected

    std::string name() const;
};

struct Sample {
    double t = 0.0;
    double l2 = 0.0;
    double lq1 = 0.0;     // L_{p+1} or L_{q+1}
    double linf = 0.0;
    double h1 = 0.0;      // spectral H^1
    double halpha = 0.0;  // spectral H^alpha: sqrt(sum (1 + lambda^alpha) c^2)
    EnergyBreakdown energy;
    double dissipation = 0.0;  // cumulative int_0^t |u_t|_2^2
    double ut_norm2 = 0.0;     // |u_t|_2^2 at t
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<Field> fields;     // per sample, when stored
    std::vector<Field> rates;      // u_t per sample, when stored
    Outcome outcome;
    std::size_t steps = 0;
    double growth_degree = 0.0;
    double initial_tail = 0.0;     // tail fraction of the projected datum

    std::vector<double> times() const;
    std::vector<double> linf() const;
    std::vector<double> energies() const;
};

/**
 * Galerkin engine in coefficient space: state c (K modes), nonlinear term
 * N(c) = projection of F(synthesis(c)), symbol sigma_k = lambda_k^alpha + mu.
 */
class Galerkin {
public:
    explicit Galerkin(ProblemSpec problem);

    const ProblemSpec& problem() const { return problem_; }
    const SpectralBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    std::span<const double> symbol() const { return sigma_; }

    std::vector<double> project(const Field& u) const { return basis_->analyze(u); }
    Field field(std::span<const double> c) const { return basis_->synthesize(c); }

    std::vector<double> nonlinear(std::span<const double> c) const;
    // -sigma c + N(c)
    std::vector<double> rhs(std::span<const double> c) const;

    // One exponential step of size dt. When n_c is given it must equal N(c).
    std::vector<double> step(std::span<const double> c, double dt, StepperConfig::Scheme scheme,
                             const std::vector<double>* n_c = nullptr) const;

private:
    ProblemSpec problem_;
    BasisPtr basis_;
    std::vector<double> sigma_;
};

// Single step on a field (projected onto the basis first).
Field step(const ProblemSpec& problem, const StepperConfig& config, const Field& u, double dt);

Trajectory evolve(const ProblemSpec& problem, const StepperConfig& config, const Field& u0);

struct ContinuityReport {
    double initial_distance = 0.0;
    double sup_ratio = 0.0;         // sup over the run of |u - v|_2 / |u0 - v0|_2
    double window = 0.0;            // length of the initial window with ratio <= 2
    std::vector<double> times;
    std::vector<double> ratios;
};

ContinuityReport continuity_probe(const ProblemSpec& problem, const StepperConfig& config,
                                  const Field& u0, const Field& v0);

struct SmoothingReport {
    double linf = 0.0;
    double h1 = 0.0;
    bool blew_up = false;
};

SmoothingReport smoothing_probe(const ProblemSpec& problem, const Field& u0, double delta);

}  // namespace npl
