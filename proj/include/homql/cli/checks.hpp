// checks.hpp
// Self-verification suites behind `homql check`.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace homql::cli {

enum class Suite { Oracle, Parity, Moments, Visibility, Decoherence };

Suite parse_suite(const std::string& text);
std::string suite_name(Suite s);
std::vector<Suite> all_suites();

struct CheckResult {
    std::string name;
    bool passed = false;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct SuiteReport {
    Suite suite = Suite::Oracle;
    std::vector<CheckResult> results;

    bool passed() const;
    nlohmann::ordered_json to_json() const;
};

SuiteReport run_suite(Suite suite);

}  // namespace homql::cli
