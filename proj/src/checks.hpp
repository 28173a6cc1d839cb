#pragma once

#include "json.hpp"

#include <string>
#include <vector>

namespace hs {

struct CheckOptions {
    unsigned seed = 1; // random points for the property suites
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    nlohmann::json to_json() const;
};

constexpr int check_count = 10;

// Acceptance criteria 1..10; tolerances and grids are fixed here.
CheckResult run_check(int id, const CheckOptions& opt = {});
std::vector<CheckResult> run_checks(const std::vector<int>& ids, const CheckOptions& opt = {});

// One "PASS|FAIL  id  name  [(seconds)]  detail" line.
std::string check_line(const CheckResult& r, bool timings = true);

} // namespace hs
