#include "npl/harness/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

#include "npl/blowup.hpp"
#include "npl/harness/io.hpp"

namespace npl::harness {

std::size_t sweep_threads() {
    if (const char* env = std::getenv("NPL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

SweepRow run_point(const SweepConfig& sweep, std::size_t i) {
    SweepRow row;
    row.index = i;
    row.values = sweep.values(i);
    row.T_est = std::numeric_limits<double>::quiet_NaN();
    try {
        const RunConfig config = sweep.point(i);
        const auto problem = make_problem(config);
        const auto traj = evolve(problem, config.stepper, make_initial_data(config, problem));
        row.outcome = traj.outcome.name();
        if (traj.outcome.kind == Outcome::Kind::BlowupSuspected) {
            try {
                row.T_est = estimate_blowup(traj, traj.growth_degree).T_est;
            } catch (const std::exception&) {
                row.T_est = traj.outcome.T_est;
            }
        }
        if (!traj.samples.empty()) {
            row.final_time = traj.samples.back().t;
            row.final_energy = traj.samples.back().energy.total;
            row.final_linf = traj.samples.back().linf;
        }
    } catch (const std::exception& e) {
        row.outcome.clear();
        row.error = e.what();
    }
    return row;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& sweep, std::optional<std::size_t> threads) {
    const std::size_t n = sweep.size();
    std::vector<SweepRow> rows(n);
    if (n == 0) return rows;
    tbb::global_control limit(tbb::global_control::max_allowed_parallelism, threads.value_or(sweep_threads()));
    tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { rows[i] = run_point(sweep, i); });
    return rows;
}

void write_sweep_csv(std::ostream& out, const SweepConfig& sweep, const std::vector<SweepRow>& rows) {
    out << "index";
    for (const auto& a : sweep.axes) out << ',' << csv_field(a.key);
    out << ",outcome,T_est,final_time,final_E,final_Linf,error\n";
    for (const auto& r : rows) {
        out << r.index;
        for (double v : r.values) out << ',' << format_double(v);
        out << ',' << r.outcome << ',' << format_double(r.T_est) << ',' << format_double(r.final_time) << ','
            << format_double(r.final_energy) << ',' << format_double(r.final_linf) << ',' << csv_field(r.error)
            << '\n';
    }
}

}  // namespace npl::harness
