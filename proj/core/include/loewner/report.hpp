#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "loewner/linalg.hpp"

namespace loewner {

/// Numeric payload that lets a reported violation be re-evaluated.
struct CheckWitness {
    std::vector<CVector> points;
    std::vector<double> times;
    double value = 0.0;
    std::string note;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    CheckWitness witness;
};

/// Structured pass/fail evidence for a batch of invariant checks.
struct VerificationReport {
    std::vector<CheckResult> checks;

    bool overall() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    const CheckResult* find(std::string_view name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

} // namespace loewner
