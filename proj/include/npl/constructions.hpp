#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "npl/integrate.hpp"

namespace npl {

/**
 * Positive solution of v'' + v^p = 0 on (0, 1), v(0) = v(1) = 0, computed by
 * shooting in v'(0) with classical RK4. Samples of (v, v') on a fine uniform
 * mesh are kept; evaluation between mesh points is cubic Hermite.
 */
class SteadyState1D {
public:
    double p() const { return p_; }
    double slope() const { return slope_; }         // v'(0)
    double max_value() const { return max_value_; }
    double argmax() const { return argmax_; }
    // (1/2) v'^2 + v^{p+1}/(p+1), equal to v'(0)^2 / 2.
    double first_integral() const { return 0.5 * slope_ * slope_; }
    // Largest deviation of the first integral over the stored mesh.
    double first_integral_drift() const { return drift_; }
    double endpoint_residual() const { return endpoint_; }  // |v(1)|

    double value(double x) const;       // zero outside [0, 1]
    double derivative(double x) const;  // zero outside [0, 1]

    // Samples on an interval grid (zero outside [0, 1]).
    Field sample(const GridPtr& grid) const;

    friend SteadyState1D steady_state_1d(double p, std::size_t mesh);

private:
    double p_ = 0.0, slope_ = 0.0, max_value_ = 0.0, argmax_ = 0.0, drift_ = 0.0, endpoint_ = 0.0;
    std::vector<double> v_, dv_;
};

SteadyState1D steady_state_1d(double p, std::size_t mesh = 20000);

// u_1 = v_1 on [0, 1], odd about 0, 2-periodic; sampled on an interval grid.
Field odd_periodic_extension(const SteadyState1D& v1, const GridPtr& grid);

struct CalibrationRow {
    double lambda = 0.0;
    bool blew_up = false;
    double T = 0.0;  // T_est when blew_up
    std::string note;
};

struct CalibrationConfig {
    std::size_t nodes = 256;
    std::size_t modes = 85;
    double dt0 = 1e-3;
    double t_budget = 1.0;
};

// T_lambda for (MP) on (0, 1) with u0 = lambda v_1.
std::vector<CalibrationRow> calibrate_T_lambda(const SteadyState1D& v1, const std::vector<double>& lambdas,
                                               const CalibrationConfig& config = {});

struct RescaledData {
    double alpha = 1.0;  // sqrt(T_lambda / T_target)
    Field u0;
};

// u0(x) = alpha^{2/(p-1)} lambda u_1(alpha x) on (0, 1/alpha), whose Dirichlet
// evolution is the rescaled periodic one and blows up at T_target.
RescaledData rescaled_blowup_data(const SteadyState1D& v1, double lambda, double T_target, double T_lambda,
                                  std::size_t nodes = 256);

/**
 * v_i(r) = M_i^2 (1 - M_i r)_+ with M_i = M^{1+(i-1) delta}, i = 1..k, as
 * radial functions on the n = 3 ball.
 */
struct BumpFamily {
    int k = 1;
    double delta = 0.0;
    double M = 1.0;
    double q = 3.0;
    std::vector<double> M_i;

    double value(int i, double r) const;  // one-based member index
    Field member(int i, const GridPtr& grid) const;
    Field combination(const std::vector<double>& coefficients, const GridPtr& grid) const;
    // Radial nodes needed to resolve the narrowest member on a ball of radius R.
    std::size_t required_nodes(double radius) const;
};

// delta defaults to (q-2)/(4k). Throws InvalidArgument when delta is outside (0, (q-2)/(2k)).
BumpFamily bump_family(int k, double M, double q, std::optional<double> delta = std::nullopt);

struct BumpScalingRow {
    double M = 0.0;
    int i = 1;
    double lq_ratio = 0.0;        // |v_i|_{q+1}^{q+1} / M_i^{2q-1}
    double quadratic_ratio = 0.0; // (|v_i|_{1,2}^2 + lambda I(v_i)) / M_i^3
};

std::vector<BumpScalingRow> bump_scaling(int k, double q, double lambda, const std::vector<double>& Ms,
                                         std::optional<double> delta = std::nullopt, double radius = 1.0);

struct SpsEnergyParts {
    double dirichlet = 0.0;  // int |grad v|^2, exact per cell for piecewise-linear interpolants
    double mass = 0.0;
    double w = 0.0;          // int |v|^{q+1}
    double interaction = 0.0;
    double energy = 0.0;     // (dirichlet + mass)/2 - w/(q+1) + lambda I / 4
};

SpsEnergyParts sps_energy_direct(const Field& v, double q, double lambda);

struct WitnessResult {
    double M = 0.0;
    std::vector<double> coefficients;
    std::string pattern;
    double energy = 0.0;
    double energy_refined = 0.0;  // re-evaluated with doubled resolution
    std::size_t nodes = 0;
};

/**
 * Doubling search over M (from M = 2) testing the normalised combinations
 * used in the construction: equal coefficients, alternating signs and each
 * single bump. Returns the first with E < 0. Throws ResolutionError when the
 * grid needed for M_k exceeds max_nodes.
 */
WitnessResult negative_energy_witness(double q, double lambda, int k, double radius = 1.0,
                                      std::size_t max_nodes = 1 << 20);

}  // namespace npl
