#pragma once

// The numbered acceptance criteria, each returning a pass/fail verdict with a
// one-line summary of the measured quantities.

#include <string>
#include <vector>

namespace besq {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

constexpr int kCriterionCount = 13;

// Numerical errors inside a criterion are reported as a failure, not thrown.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all_criteria();

}  // namespace besq
