#pragma once

#include <string>
#include <vector>

namespace nlrd::verify {

/// One acceptance criterion outcome. `measured` is the criterion's worst-case
/// metric and `tol` the stated tolerance on it; sub-check details go in
/// `detail`.
struct CheckResult {
    std::string name;
    double target = 0.0;
    double measured = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;
};

enum class Level { fast, full };

/// Run the acceptance criteria: fast covers every non-simulation oracle,
/// full adds the d=1/d=3 decay-exponent and Model II steady-state runs.
std::vector<CheckResult> run_suite(Level level);

/// Stable-schema JSON report: {schema_version, level, checks: [...], all_pass}.
std::string report_json(const std::vector<CheckResult>& checks, Level level);

}  // namespace nlrd::verify
