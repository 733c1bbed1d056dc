#include "npl/harness/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "npl/blowup.hpp"
#include "npl/constructions.hpp"
#include "npl/energy.hpp"
#include "npl/errors.hpp"

namespace npl::harness {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string>& trajectory_columns() {
    static const std::vector<std::string> cols = {"t", "L2", "Lq1", "Linf", "H1", "E", "Phi", "I", "diss_residual"};
    return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const auto& cols = trajectory_columns();
    for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j];
    out << '\n';
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        const double res = i == 0 ? 0.0 : dissipation_residual(traj, i - 1);
        const double row[] = {s.t, s.l2, s.lq1, s.linf, s.h1, s.energy.total, s.energy.potential,
                              s.energy.interaction, res};
        for (std::size_t j = 0; j < std::size(row); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

std::vector<double> TrajectoryTable::column(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] != name) continue;
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(r.at(j));
        return v;
    }
    throw InvalidArgument("no column '" + name + "'");
}

TrajectoryTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    TrajectoryTable t;
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument(path.string() + " is empty");
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) t.columns.push_back(c);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        for (std::string c; std::getline(rs, c, ',');) {
            try {
                row.push_back(std::stod(c));
            } catch (const std::exception&) {
                throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
            }
        }
        if (row.size() != t.columns.size()) {
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

json blowup_json(const BlowupReport& b) {
    return {{"T_est", b.T_est},         {"rate_exponent", b.rate_exponent}, {"rate_stderr", b.rate_stderr},
            {"r_squared", b.r_squared}, {"fit_t0", b.fit_t0},               {"fit_t1", b.fit_t1},
            {"fit_samples", b.fit_samples}, {"energy_at_last_sample", b.energy_at_last_sample}};
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json make_report(const ProblemSpec& problem, const Trajectory& traj) {
    json r;
    r["outcome"] = traj.outcome.name();
    r["T_est_stepper"] = traj.outcome.T_est;
    r["steps"] = traj.steps;
    r["samples"] = traj.samples.size();
    r["final_time"] = traj.samples.empty() ? 0.0 : traj.samples.back().t;
    r["growth_degree"] = traj.growth_degree;
    r["initial_tail"] = traj.initial_tail;
    r["modes"] = problem.modes;
    r["nodes"] = problem.grid->size();

    double max_res = 0.0;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) max_res = std::max(max_res, dissipation_residual(traj, i));
    r["max_dissipation_residual"] = max_res;

    r["blowup"] = nullptr;
    if (traj.outcome.kind == Outcome::Kind::BlowupSuspected) {
        try {
            r["blowup"] = blowup_json(estimate_blowup(traj, traj.growth_degree));
        } catch (const FitError& e) {
            r["blowup_error"] = e.what();
        }
    }
    r["decay"] = nullptr;
    if (traj.outcome.kind != Outcome::Kind::BlowupSuspected && !traj.samples.empty() && traj.samples.back().t > 2.0) {
        try {
            const auto d = decay_fit(traj, traj.growth_degree);
            r["decay"] = {{"exponent", d.exponent}, {"standard_error", d.standard_error}, {"samples", d.samples}};
        } catch (const std::exception& e) {
            r["decay_error"] = e.what();
        }
    }
    if (traj.samples.size() >= 10) {
        const auto m = energy_blowup_monitor(traj);
        r["monitor"] = {{"verdict", EnergyMonitorReport::name(m.verdict)},
                        {"first_negative_time", nullable(m.first_negative_time)},
                        {"initial_energy", m.initial_energy},
                        {"final_energy", m.final_energy},
                        {"energy_monotone_final", m.energy_monotone_final},
                        {"norm_increasing_final", m.norm_increasing_final},
                        {"energy_slope_final", m.energy_slope_final},
                        {"norm_slope_final", m.norm_slope_final}};
    } else {
        r["monitor"] = nullptr;
    }
    return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

namespace {

std::map<std::string, double> construction_parameters(const RunConfig& c) {
    std::map<std::string, double> m;
    const auto& d = c.initial;
    if (d.kind == "steady_1d" || d.kind == "periodic_1d" || d.kind == "rescaled_1d") {
        const auto v1 = steady_state_1d(c.nonlinearity.p);
        m["v1_slope"] = v1.slope();
        m["v1_max"] = v1.max_value();
        if (d.kind == "rescaled_1d") m["alpha"] = std::sqrt(d.t_lambda / d.t_target);
    } else if (d.kind == "bumps") {
        const auto fam = bump_family(d.k, d.M, c.nonlinearity.q);
        m["delta"] = fam.delta;
        m["M_k"] = fam.M_i.back();
    }
    return m;
}

void write_plotdata(const std::filesystem::path& dir, const json& report, const Trajectory& traj) {
    std::filesystem::create_directories(dir);
    {
        std::ostringstream s;
        s << "t,E,D,E_plus_D\n";
        for (const auto& x : traj.samples) {
            s << format_double(x.t) << ',' << format_double(x.energy.total) << ',' << format_double(x.dissipation)
              << ',' << format_double(x.energy.total + x.dissipation) << '\n';
        }
        write_text(dir / "energy.csv", s.str());
    }
    if (!report["blowup"].is_null()) {
        const double T = report["blowup"]["T_est"].get<double>();
        std::ostringstream s;
        s << "t,Linf,T_minus_t,log_T_minus_t,log_Linf\n";
        for (const auto& x : traj.samples) {
            if (!(x.t < T) || !(x.linf > 0.0)) continue;
            s << format_double(x.t) << ',' << format_double(x.linf) << ',' << format_double(T - x.t) << ','
              << format_double(std::log(T - x.t)) << ',' << format_double(std::log(x.linf)) << '\n';
        }
        write_text(dir / "rate_fit.csv", s.str());
    }
    if (!report["decay"].is_null()) {
        std::ostringstream s;
        s << "t,Linf,log_t,log_Linf\n";
        for (const auto& x : traj.samples) {
            if (!(x.t > 0.0) || !(x.linf > 0.0)) continue;
            s << format_double(x.t) << ',' << format_double(x.linf) << ',' << format_double(std::log(x.t)) << ','
              << format_double(std::log(x.linf)) << '\n';
        }
        write_text(dir / "decay_fit.csv", s.str());
    }
}

}  // namespace

RunResult run_in_memory(const RunConfig& config) {
    RunResult r;
    r.manifest.experiment_id = config.id;
    r.manifest.code_version = code_version();
    r.manifest.created = utc_timestamp();
    r.manifest.config = config;
    const auto problem = make_problem(config);
    const Field u0 = make_initial_data(config, problem);
    r.manifest.construction = construction_parameters(config);
    r.trajectory = evolve(problem, config.stepper, u0);
    r.report = make_report(problem, r.trajectory);
    auto& o = r.manifest.outcome;
    o.kind = r.trajectory.outcome.name();
    o.T_est = r.trajectory.outcome.T_est;
    if (!r.report["blowup"].is_null()) o.T_est = r.report["blowup"]["T_est"].get<double>();
    o.steps = r.trajectory.steps;
    if (!r.trajectory.samples.empty()) {
        const auto& last = r.trajectory.samples.back();
        o.final_time = last.t;
        o.final_energy = last.energy.total;
        o.final_linf = last.linf;
    }
    r.manifest.finished = utc_timestamp();
    return r;
}

RunResult execute_run(const RunConfig& config, const std::filesystem::path& out_dir) {
    auto r = run_in_memory(config);
    std::filesystem::create_directories(out_dir);
    write_text(out_dir / "manifest.json", emit_manifest(r.manifest));
    std::ostringstream csv;
    write_trajectory_csv(csv, r.trajectory);
    write_text(out_dir / "trajectory.csv", csv.str());
    write_text(out_dir / "report.json", r.report.dump(2) + "\n");
    write_plotdata(out_dir / "plotdata", r.report, r.trajectory);
    return r;
}

}  // namespace npl::harness
