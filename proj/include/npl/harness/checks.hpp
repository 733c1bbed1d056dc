#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace npl::harness {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // measured quantity
    double tolerance = 0.0;  // bound it is compared against
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
    nlohmann::json to_json() const;
};

// quadrature, gradient, identities, exponents, ledger
const std::vector<std::string>& suite_names();

// Throws std::out_of_range for an unknown suite.
SuiteReport run_suite(std::string_view name);

}  // namespace npl::harness
