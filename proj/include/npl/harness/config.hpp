#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "npl/integrate.hpp"

namespace npl::harness {

// Configuration problem; carries the offending line when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::optional<std::size_t> line = std::nullopt);
    std::optional<std::size_t> line() const { return line_; }

private:
    std::optional<std::size_t> line_;
};

struct GridConfig {
    std::string kind = "interval";  // interval | ball
    double a = 0.0;
    double b = 1.0;
    double radius = 1.0;
    int dimension = 3;
    std::size_t nodes = 256;

    bool operator==(const GridConfig&) const = default;
};

/**
 * Named initial data:
 *   sine        amplitude * sin(mode pi (x-a)/L), radial: amplitude * sinc(mode pi r/R)
 *   gaussian    amplitude * exp(-((x-center)/width)^2)
 *   modes       sum coefficients[k] phi_{k+1}
 *   steady_1d   lambda * v_1 (positive steady state on (0, 1))
 *   periodic_1d lambda * u_1 (odd 2-periodic extension of v_1)
 *   rescaled_1d alpha^{2/(p-1)} lambda u_1(alpha x), alpha = sqrt(t_lambda / t_target)
 *   bumps       amplitude * sum coefficients[i] v_i of the bump family (k, M, q)
 */
struct InitialDataConfig {
    std::string kind = "sine";
    double amplitude = 1.0;
    int mode = 1;
    double width = 0.1;
    double center = 0.5;
    std::vector<double> coefficients;
    double lambda = 1.0;
    double t_target = 1.0;
    double t_lambda = 1.0;
    double M = 8.0;
    int k = 1;

    bool operator==(const InitialDataConfig&) const = default;
};

struct RunConfig {
    std::string id = "run";
    GridConfig grid;
    std::size_t modes = 0;  // 0: largest K with N - 1 >= 3K
    OperatorSpec op;
    NonlinearitySpec nonlinearity;
    StepperConfig stepper;
    InitialDataConfig initial;

    bool operator==(const RunConfig&) const = default;
};

struct SweepAxis {
    std::string key;  // dotted parameter name, e.g. initial_data.amplitude
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

inline constexpr std::size_t max_sweep_points = 10000;

struct SweepConfig {
    RunConfig base;
    std::vector<SweepAxis> axes;

    // Cartesian product size; 0 when any axis is empty.
    std::size_t size() const;
    // Values of point i, last axis fastest.
    std::vector<double> values(std::size_t index) const;
    RunConfig point(std::size_t index) const;
};

RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);
SweepConfig parse_sweep_config(std::string_view text, std::string_view source = "<config>");
SweepConfig load_sweep_config(const std::filesystem::path& path);

// Sets one numeric parameter by dotted name (problem.p, stepper.dt0, initial_data.amplitude, ...).
void set_parameter(RunConfig& config, std::string_view key, double value);
double get_parameter(const RunConfig& config, std::string_view key);

struct ParameterInfo {
    std::string key;
    bool integral = false;
};
std::vector<ParameterInfo> parameter_info();

ProblemSpec make_problem(const RunConfig& config);
Field make_initial_data(const RunConfig& config, const ProblemSpec& problem);

}  // namespace npl::harness
