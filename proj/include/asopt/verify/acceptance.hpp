#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace asopt {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0; // 0 = no runtime bound
};

// Ids 1..11 in order.
std::vector<int> criterion_ids();
std::string criterion_name(int id);

// Runs one criterion. Criteria that write files use `scratch`, which is
// created if missing. A criterion that throws is reported as a failure.
CriterionResult run_criterion(int id, const std::filesystem::path& scratch);

// Empty `ids` runs everything.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const std::filesystem::path& scratch);

// "PASS  01 gradient-oracle  0.41 s  <detail>"
std::string format_result(const CriterionResult& r);

// {"pass": bool, "criteria": [{id, name, pass, detail, seconds, limit_seconds}]}
nlohmann::json results_json(const std::vector<CriterionResult>& results);

} // namespace asopt
