#pragma once

// The acceptance suite: one pass/fail verdict per criterion, with the
// measured quantities that decided it. Tolerances are fixed in acceptance.cpp.

#include <string>
#include <utility>
#include <vector>

namespace catenoid {

struct CriterionResult {
    int id{0};
    std::string title;
    bool passed{false};
    /// Gated measurements with their limits, as "name=value (<= limit)".
    std::vector<std::string> measurements;
    /// Reported but not gated.
    std::vector<std::string> notes;
};

std::vector<CriterionResult> run_acceptance();

/// One line per criterion: "PASS|FAIL <id> <title>: measurements".
std::string format_acceptance(const std::vector<CriterionResult>& results, bool with_notes = true);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace catenoid
