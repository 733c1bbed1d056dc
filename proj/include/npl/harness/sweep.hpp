#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "npl/harness/config.hpp"

namespace npl::harness {

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> values;  // one per axis
    std::string outcome;         // empty when the run failed
    double T_est = 0.0;          // NaN unless BlowupSuspected
    double final_time = 0.0;
    double final_energy = 0.0;
    double final_linf = 0.0;
    std::string error;
};

// NPL_THREADS when set to a positive integer, else the hardware concurrency.
std::size_t sweep_threads();

// Runs every grid point independently; a failing point is recorded in its row.
std::vector<SweepRow> run_sweep(const SweepConfig& sweep, std::optional<std::size_t> threads = std::nullopt);

// index, <axis keys...>, outcome, T_est, final_time, final_E, final_Linf, error
void write_sweep_csv(std::ostream& out, const SweepConfig& sweep, const std::vector<SweepRow>& rows);

}  // namespace npl::harness
