#include "npl/harness/manifest.hpp"

#include <chrono>
#include <ctime>

#ifndef NPL_VERSION
#define NPL_VERSION "0.0.0"
#endif

namespace npl::harness {

using nlohmann::json;

const char* code_version() { return NPL_VERSION; }

namespace {

const char* kind_name(NonlinearitySpec::Kind k) {
    switch (k) {
        case NonlinearitySpec::Kind::Power: return "power";
        case NonlinearitySpec::Kind::Choquard: return "choquard";
        case NonlinearitySpec::Kind::Sps: return "sps";
    }
    return "power";
}

std::pair<std::string, std::string> split_key(const std::string& key) {
    const auto dot = key.find('.');
    return {key.substr(0, dot), key.substr(dot + 1)};
}

}  // namespace

json to_json(const RunConfig& c) {
    json j;
    j["id"] = c.id;
    for (const auto& info : parameter_info()) {
        const auto [section, name] = split_key(info.key);
        const double v = get_parameter(c, info.key);
        if (info.integral) j[section][name] = static_cast<long long>(v);
        else j[section][name] = v;
    }
    j["problem"]["grid"] = c.grid.kind;
    j["problem"]["nonlinearity"] = kind_name(c.nonlinearity.kind);
    j["problem"]["sign"] = c.nonlinearity.sign == NonlinearitySpec::Sign::Plus ? "plus" : "minus";
    j["problem"]["operator"] = c.op.flavor == OperatorSpec::Flavor::Spectral ? "spectral" : "restricted_1d";
    j["stepper"]["scheme"] = c.stepper.scheme == StepperConfig::Scheme::Etd1 ? "etd1" : "etd2rk";
    j["stepper"]["store_fields"] = c.stepper.store_fields;
    j["initial_data"]["kind"] = c.initial.kind;
    j["initial_data"]["coefficients"] = c.initial.coefficients;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    c.id = j.at("id").get<std::string>();
    for (const auto& info : parameter_info()) {
        const auto [section, name] = split_key(info.key);
        set_parameter(c, info.key, j.at(section).at(name).get<double>());
    }
    const auto& pr = j.at("problem");
    c.grid.kind = pr.at("grid").get<std::string>();
    const auto kind = pr.at("nonlinearity").get<std::string>();
    c.nonlinearity.kind = kind == "choquard" ? NonlinearitySpec::Kind::Choquard
                        : kind == "sps"      ? NonlinearitySpec::Kind::Sps
                                             : NonlinearitySpec::Kind::Power;
    c.nonlinearity.sign = pr.at("sign").get<std::string>() == "plus" ? NonlinearitySpec::Sign::Plus
                                                                     : NonlinearitySpec::Sign::Minus;
    c.op.flavor = pr.at("operator").get<std::string>() == "restricted_1d" ? OperatorSpec::Flavor::Restricted1D
                                                                         : OperatorSpec::Flavor::Spectral;
    const auto& st = j.at("stepper");
    c.stepper.scheme = st.at("scheme").get<std::string>() == "etd1" ? StepperConfig::Scheme::Etd1
                                                                   : StepperConfig::Scheme::Etd2rk;
    c.stepper.store_fields = st.at("store_fields").get<bool>();
    const auto& in = j.at("initial_data");
    c.initial.kind = in.at("kind").get<std::string>();
    c.initial.coefficients = in.at("coefficients").get<std::vector<double>>();
    return c;
}

json to_json(const RunManifest& m) {
    json j;
    j["experiment_id"] = m.experiment_id;
    j["schema"] = m.schema;
    j["code_version"] = m.code_version;
    j["created"] = m.created;
    j["finished"] = m.finished;
    j["config"] = to_json(m.config);
    j["construction"] = m.construction;
    j["outcome"] = {{"kind", m.outcome.kind},
                    {"T_est", m.outcome.T_est},
                    {"steps", m.outcome.steps},
                    {"final_time", m.outcome.final_time},
                    {"final_energy", m.outcome.final_energy},
                    {"final_linf", m.outcome.final_linf}};
    return j;
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.experiment_id = j.at("experiment_id").get<std::string>();
    m.schema = j.at("schema").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.created = j.at("created").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.config = run_config_from_json(j.at("config"));
    m.construction = j.at("construction").get<std::map<std::string, double>>();
    const auto& o = j.at("outcome");
    m.outcome.kind = o.at("kind").get<std::string>();
    m.outcome.T_est = o.at("T_est").get<double>();
    m.outcome.steps = o.at("steps").get<std::size_t>();
    m.outcome.final_time = o.at("final_time").get<double>();
    m.outcome.final_energy = o.at("final_energy").get<double>();
    m.outcome.final_linf = o.at("final_linf").get<double>();
    return m;
}

std::string emit_manifest(const RunManifest& m) { return to_json(m).dump(2) + "\n"; }

RunManifest parse_manifest(std::string_view text) { return manifest_from_json(json::parse(text)); }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace npl::harness
