#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "npl/harness/manifest.hpp"
#include "npl/integrate.hpp"

namespace npl::harness {

inline constexpr const char* trajectory_schema = "npl-trajectory/1";

// t, L2, Lq1, Linf, H1, E, Phi, I, diss_residual
const std::vector<std::string>& trajectory_columns();

// Row i carries the dissipation residual of the step ending at sample i (0 on row 0).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct TrajectoryTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
};

TrajectoryTable read_csv_table(const std::filesystem::path& path);

// Outcome, blow-up or decay fit, energy monitor and residual summary.
nlohmann::json make_report(const ProblemSpec& problem, const Trajectory& traj);

struct RunResult {
    RunManifest manifest;
    nlohmann::json report;
    Trajectory trajectory;
};

// Evolves the configured problem and writes manifest.json, trajectory.csv,
// report.json and plotdata/*.csv into out_dir.
RunResult execute_run(const RunConfig& config, const std::filesystem::path& out_dir);

// Same without touching the filesystem.
RunResult run_in_memory(const RunConfig& config);

void write_text(const std::filesystem::path& path, const std::string& text);

// %.17g
std::string format_double(double v);

}  // namespace npl::harness
