#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "npl/integrate.hpp"

namespace npl {

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::size_t samples = 0;
};

// Ordinary least squares y = intercept + slope * x. Needs at least 3 points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Number of leading samples before linf^{-(p-1)}/(p-1), the distance to
// blow-up, drops below 1e4 ulp of t; later samples cannot resolve T - t.
std::size_t resolved_prefix(std::span<const double> t, std::span<const double> linf, double p);

struct BlowupReport {
    double T_est = 0.0;
    double rate_exponent = 0.0;
    double rate_stderr = 0.0;
    double r_squared = 0.0;
    double fit_t0 = 0.0;
    double fit_t1 = 0.0;
    std::size_t fit_samples = 0;
    double energy_at_last_sample = 0.0;
};

/**
 * Blow-up time and rate from a growing L_inf history.
 *
 * Window: samples in the last decade of growth (linf >= linf_max / 10),
 * minus the final 3, cut at resolved_prefix. T_est comes from the linear fit of linf^{-(p-1)}
 * against t (exact for the spatially flat ODE solution), the rate from the
 * slope of log linf against log(T_est - t). Throws FitError with fewer than
 * 20 samples in the window.
 */
BlowupReport estimate_blowup(std::span<const double> t, std::span<const double> linf, double p);
BlowupReport estimate_blowup(const Trajectory& traj, double p);

struct DecayFit {
    double exponent = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

// Slope of log linf against log t over [t0, t1] (defaults: [1, last time]).
DecayFit decay_fit(std::span<const double> t, std::span<const double> linf, double t0 = 1.0,
                   std::optional<double> t1 = std::nullopt);
DecayFit decay_fit(const Trajectory& traj, double p, double t0 = 1.0, std::optional<double> t1 = std::nullopt);

// max over resolved samples with 0 < t < T of linf / (t^{-1/(p-1)} + (T-t)^{-1/(p-1)}).
double universal_profile(std::span<const double> t, std::span<const double> linf, double p, double T);
double universal_profile(const Trajectory& traj, double p, double T);

// Rescaled fields w(y, s) on a fixed y grid, one row per snapshot.
struct SimilaritySequence {
    std::vector<double> y;
    std::vector<double> s;
    std::vector<std::vector<double>> w;
    double sup_w = 0.0;

    // max over rows and y of |w(y, s) - w(y, s_0)|.
    double s_variation() const;
};

/**
 * Backward variables around (a, T): y = (x-a)/sqrt(T-t), s = -log(T-t),
 * w = (T-t)^{1/(p-1)} u(a + y sqrt(T-t), t). Snapshots need t < T. On radial
 * grids y is the radial variable and a must be 0.
 */
SimilaritySequence backward_similarity(std::span<const double> times, std::span<const Field> fields, double a,
                                       double T, double p, double y_max = 4.0, std::size_t ny = 81);
SimilaritySequence backward_similarity(const Trajectory& traj, double a, double T, double p,
                                       double y_max = 4.0, std::size_t ny = 81);

// Forward variables: y = x/sqrt(t+1), s = log(t+1), w = (t+1)^{1/(p-1)} u(y sqrt(t+1), t).
SimilaritySequence forward_similarity(std::span<const double> times, std::span<const Field> fields, double p,
                                      double y_max = 4.0, std::size_t ny = 81);
SimilaritySequence forward_similarity(const Trajectory& traj, double p, double y_max = 4.0,
                                      std::size_t ny = 81);

// max |w_s - (w_yy - y w_y / 2 - w/(p-1) + |w|^{p-1} w)| over interior points (1D).
double backward_similarity_residual(const SimilaritySequence& seq, double p);

struct EnergyMonitorReport {
    enum class Verdict { EnergyStaysNonneg, EnergyDiverging, Inconclusive };

    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> first_negative_time;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    bool energy_monotone_final = false;  // non-increasing over the final 10% of samples
    bool norm_increasing_final = false;  // linf non-decreasing over the final 10% of samples
    double energy_slope_final = 0.0;     // dE/dt fitted over the final 10%
    double norm_slope_final = 0.0;       // d linf/dt fitted over the final 10%

    static const char* name(Verdict v);
};

EnergyMonitorReport energy_blowup_monitor(const Trajectory& traj);

}  // namespace npl
