#pragma once

#include <string>
#include <vector>

namespace mslab {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;

    bool all_pass() const;
    std::string text() const; // deterministic: fixed formatting, no timings
};

// suites: geometry | elliptic | stepper | dynamics | all
VerifyReport verify_suite(const std::string& suite, unsigned seed);

} // namespace mslab
