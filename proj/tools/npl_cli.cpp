#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "npl/blowup.hpp"
#include "npl/constructions.hpp"
#include "npl/errors.hpp"
#include "npl/exponents.hpp"
#include "npl/harness/checks.hpp"
#include "npl/harness/config.hpp"
#include "npl/harness/io.hpp"
#include "npl/harness/sweep.hpp"

using nlohmann::json;
namespace h = npl::harness;

namespace {

constexpr int exit_ok = 0, exit_check = 1, exit_usage = 2;

json ext(const npl::ExtReal& v) { return v.is_infinite() ? json("inf") : json(v.value()); }

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        h::write_text(path, j.dump(2) + "\n");
    }
}

int cmd_exponents(int n, std::optional<double> p, std::optional<double> q, double alpha, const std::string& json_path) {
    const auto t = npl::exponent_table(n, p, q, alpha);
    std::printf("n      %d\nalpha  %g\n", t.n, t.alpha);
    std::printf("p_S    %s\np*     %s\np_CL   %s\np_F    %.10g\np_S(a) %s\n", t.p_S.to_string().c_str(),
                t.p_star.to_string().c_str(), t.p_CL.to_string().c_str(), t.p_F, t.p_S_alpha.to_string().c_str());
    if (t.q_star) std::printf("q*     %s\n", t.q_star->to_string().c_str());
    if (t.R_star) std::printf("R*     %.10g\n", *t.R_star);
    if (!json_path.empty()) {
        json j = {{"n", t.n}, {"alpha", t.alpha}, {"p_S", ext(t.p_S)}, {"p_star", ext(t.p_star)},
                  {"p_CL", ext(t.p_CL)}, {"p_F", t.p_F}, {"p_S_alpha", ext(t.p_S_alpha)}};
        if (t.p) j["p"] = *t.p;
        if (t.q) j["q"] = *t.q;
        if (t.q_star) j["q_star"] = ext(*t.q_star);
        if (t.R_star) j["R_star"] = *t.R_star;
        emit(j, json_path);
    }
    return exit_ok;
}

int cmd_evolve(const std::string& config_path, std::string out) {
    const auto config = h::load_run_config(config_path);
    if (out.empty()) out = "runs/" + config.id;
    const auto r = h::execute_run(config, out);
    std::printf("%s: %s after %zu steps, t = %.6g", config.id.c_str(), r.manifest.outcome.kind.c_str(),
                r.manifest.outcome.steps, r.manifest.outcome.final_time);
    if (r.manifest.outcome.kind == "BlowupSuspected") std::printf(", T_est = %.8g", r.manifest.outcome.T_est);
    std::printf("\nwrote %s\n", out.c_str());
    return exit_ok;
}

int cmd_sweep(const std::string& config_path, const std::string& out, std::optional<std::size_t> threads) {
    const auto sweep = h::load_sweep_config(config_path);
    const auto rows = h::run_sweep(sweep, threads);
    std::ostringstream csv;
    h::write_sweep_csv(csv, sweep, rows);
    if (out.empty() || out == "-") std::cout << csv.str();
    else h::write_text(out, csv.str());
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
    std::fprintf(stderr, "%zu runs, %zu failed\n", rows.size(), failed);
    return exit_ok;
}

int cmd_fit(const std::string& path, double p, const std::string& kind, double t0, std::optional<double> t1) {
    const auto table = h::read_csv_table(path);
    const auto t = table.column("t");
    const auto linf = table.column("Linf");
    json j;
    if (kind == "blowup") {
        const auto b = npl::estimate_blowup(t, linf, p);
        j = {{"T_est", b.T_est},         {"rate_exponent", b.rate_exponent}, {"rate_stderr", b.rate_stderr},
             {"r_squared", b.r_squared}, {"fit_t0", b.fit_t0},               {"fit_t1", b.fit_t1},
             {"fit_samples", b.fit_samples},
             {"universal_profile", npl::universal_profile(t, linf, p, b.T_est)}};
    } else {
        const auto d = npl::decay_fit(t, linf, t0, t1);
        j = {{"exponent", d.exponent}, {"standard_error", d.standard_error}, {"samples", d.samples}};
    }
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_check(const std::string& suite, const std::string& json_path) {
    std::vector<std::string> names;
    if (suite == "all") names = h::suite_names();
    else names.push_back(suite);
    json all = json::array();
    bool ok = true;
    for (const auto& name : names) {
        const auto rep = h::run_suite(name);
        for (const auto& c : rep.checks) {
            std::printf("%s %s/%s value=%.6g tol=%.3g%s%s\n", c.passed ? "PASS" : "FAIL", rep.suite.c_str(),
                        c.name.c_str(), c.value, c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
        }
        ok = ok && rep.passed();
        all.push_back(rep.to_json());
    }
    if (!json_path.empty()) emit(names.size() == 1 ? all[0] : all, json_path);
    return ok ? exit_ok : exit_check;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for semilinear parabolic problems"};
    app.require_subcommand(1);

    int n = 3;
    std::optional<double> p_opt, q_opt;
    double alpha = 1.0;
    std::string json_path;
    auto* ex = app.add_subcommand("exponents", "Critical exponents for dimension n");
    ex->add_option("--n", n, "Space dimension")->required()->check(CLI::PositiveNumber);
    ex->add_option("--p", p_opt, "Power exponent");
    ex->add_option("--q", q_opt, "SPS exponent");
    ex->add_option("--alpha", alpha, "Fractional order in (0, 1]")->check(CLI::Range(0.0, 1.0));
    ex->add_option("--json", json_path, "Write the table as JSON ('-' for stdout)");

    std::string config_path, out;
    auto* ev = app.add_subcommand("evolve", "Run one configured evolution");
    ev->add_option("config", config_path, "TOML config")->required()->check(CLI::ExistingFile);
    ev->add_option("--out", out, "Run directory (default runs/<id>)");

    std::optional<std::size_t> threads;
    auto* sw = app.add_subcommand("sweep", "Run a parameter grid");
    sw->add_option("config", config_path, "TOML config with a [sweep] table")->required()->check(CLI::ExistingFile);
    sw->add_option("--out", out, "CSV path (default stdout)");
    sw->add_option("--threads", threads, "Worker cap (default NPL_THREADS or all cores)")->check(CLI::PositiveNumber);

    double fit_p = 3.0, t0 = 1.0;
    std::optional<double> t1;
    std::string kind = "blowup";
    auto* fi = app.add_subcommand("fit", "Blow-up or decay fit of a trajectory.csv");
    fi->add_option("trajectory", config_path, "trajectory.csv")->required()->check(CLI::ExistingFile);
    fi->add_option("--p", fit_p, "Growth degree of the nonlinearity")->required();
    fi->add_option("--kind", kind, "blowup or decay")->check(CLI::IsMember({"blowup", "decay"}));
    fi->add_option("--t0", t0, "Decay window start");
    fi->add_option("--t1", t1, "Decay window end");

    std::string suite;
    auto* ch = app.add_subcommand("check", "Run an invariant suite");
    ch->add_option("suite", suite, "quadrature, gradient, identities, exponents, ledger or all")->required();
    ch->add_option("--json", json_path, "Write the report as JSON ('-' for stdout)");

    auto* co = app.add_subcommand("construct", "Explicit constructions");
    co->require_subcommand(1);
    double cp = 3.0, cq = 3.0, clambda = 1.0, t_target = 1.0, t_lambda = 1.0, budget = 1.0, radius = 1.0;
    std::optional<double> delta;
    std::size_t mesh = 20000, nodes = 256, modes = 85;
    int k = 1;
    std::vector<double> list;
    auto* c_steady = co->add_subcommand("steady", "Positive steady state v_1 on (0, 1)");
    c_steady->add_option("--p", cp, "Exponent p > 1")->required();
    c_steady->add_option("--mesh", mesh, "Shooting mesh");
    auto* c_cal = co->add_subcommand("calibrate", "Blow-up times T_lambda of lambda v_1");
    c_cal->add_option("--p", cp, "Exponent p > 1")->required();
    c_cal->add_option("--lambdas", list, "Amplitude factors")->required()->delimiter(',');
    c_cal->add_option("--budget", budget, "Time budget per run");
    c_cal->add_option("--nodes", nodes, "Grid nodes");
    c_cal->add_option("--modes", modes, "Galerkin modes");
    auto* c_res = co->add_subcommand("rescaled", "Rescaled sign-changing datum");
    c_res->add_option("--p", cp, "Exponent p > 1")->required();
    c_res->add_option("--lambda", clambda, "Amplitude factor")->required();
    c_res->add_option("--t-target", t_target, "Target blow-up time")->required();
    c_res->add_option("--t-lambda", t_lambda, "Calibrated T_lambda")->required();
    c_res->add_option("--nodes", nodes, "Grid nodes");
    c_res->add_option("--out", out, "CSV of x, u0");
    auto* c_wit = co->add_subcommand("witness", "Negative-energy bump combination");
    c_wit->add_option("--q", cq, "Exponent in (2, 5)")->required();
    c_wit->add_option("--lambda", clambda, "Coupling > 0")->required();
    c_wit->add_option("--k", k, "Number of bumps")->required();
    c_wit->add_option("--radius", radius, "Ball radius");
    auto* c_bump = co->add_subcommand("bumps", "Scaling ratios of the bump family");
    c_bump->add_option("--q", cq, "Exponent in (2, 5)")->required();
    c_bump->add_option("--lambda", clambda, "Coupling")->required();
    c_bump->add_option("--k", k, "Number of bumps")->required();
    c_bump->add_option("--M", list, "Base heights")->required()->delimiter(',');
    c_bump->add_option("--delta", delta, "Height spacing exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*ex) return cmd_exponents(n, p_opt, q_opt, alpha, json_path);
        if (*ev) return cmd_evolve(config_path, out);
        if (*sw) return cmd_sweep(config_path, out, threads);
        if (*fi) return cmd_fit(config_path, fit_p, kind, t0, t1);
        if (*ch) return cmd_check(suite, json_path);
        if (*c_steady) {
            const auto v = npl::steady_state_1d(cp, mesh);
            std::cout << json{{"p", v.p()}, {"slope", v.slope()}, {"max_value", v.max_value()},
                              {"argmax", v.argmax()}, {"first_integral", v.first_integral()},
                              {"first_integral_drift", v.first_integral_drift()},
                              {"endpoint_residual", v.endpoint_residual()}}.dump(2)
                      << '\n';
        } else if (*c_cal) {
            npl::CalibrationConfig cc;
            cc.nodes = nodes;
            cc.modes = modes;
            cc.t_budget = budget;
            json rows = json::array();
            for (const auto& r : npl::calibrate_T_lambda(npl::steady_state_1d(cp), list, cc)) {
                rows.push_back({{"lambda", r.lambda}, {"blew_up", r.blew_up},
                                {"T", r.blew_up ? json(r.T) : json(nullptr)}, {"note", r.note}});
            }
            std::cout << rows.dump(2) << '\n';
        } else if (*c_res) {
            const auto d = npl::rescaled_blowup_data(npl::steady_state_1d(cp), clambda, t_target, t_lambda, nodes);
            std::cout << json{{"alpha", d.alpha}, {"length", d.u0.grid().length()}, {"linf", d.u0.max_abs()}}.dump(2)
                      << '\n';
            if (!out.empty()) {
                std::ostringstream s;
                s << "x,u0\n";
                for (std::size_t i = 0; i < d.u0.size(); ++i) {
                    s << h::format_double(d.u0.grid().node(i)) << ',' << h::format_double(d.u0[i]) << '\n';
                }
                h::write_text(out, s.str());
            }
        } else if (*c_wit) {
            const auto w = npl::negative_energy_witness(cq, clambda, k, radius);
            std::cout << json{{"M", w.M}, {"pattern", w.pattern}, {"coefficients", w.coefficients},
                              {"energy", w.energy}, {"energy_refined", w.energy_refined}, {"nodes", w.nodes}}.dump(2)
                      << '\n';
        } else if (*c_bump) {
            json rows = json::array();
            for (const auto& r : npl::bump_scaling(k, cq, clambda, list, delta)) {
                rows.push_back({{"M", r.M}, {"i", r.i}, {"lq_ratio", r.lq_ratio}, {"quadratic_ratio", r.quadratic_ratio}});
            }
            std::cout << rows.dump(2) << '\n';
        }
        return exit_ok;
    } catch (const h::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_usage;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return exit_usage;
    } catch (const npl::ResolutionError& e) {
        std::fprintf(stderr, "resolution refused: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_check;
    }
}
