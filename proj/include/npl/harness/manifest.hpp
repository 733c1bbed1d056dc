#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "npl/harness/config.hpp"

namespace npl::harness {

inline constexpr const char* manifest_schema = "npl-run/1";

const char* code_version();

struct OutcomeSummary {
    std::string kind;
    double T_est = 0.0;
    std::size_t steps = 0;
    double final_time = 0.0;
    double final_energy = 0.0;
    double final_linf = 0.0;

    bool operator==(const OutcomeSummary&) const = default;
};

struct RunManifest {
    std::string experiment_id;
    std::string schema = manifest_schema;
    std::string code_version;
    std::string created;   // UTC, ISO 8601
    std::string finished;
    RunConfig config;
    std::map<std::string, double> construction;  // derived parameters of named data
    OutcomeSummary outcome;

    bool operator==(const RunManifest&) const = default;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

std::string emit_manifest(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view text);

std::string utc_timestamp();

}  // namespace npl::harness
