#pragma once

// The acceptance suite: ten property checks over every module, each with a
// pinned tolerance. Used by the acceptance test binary and `latwave verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace latwave::acceptance {

inline constexpr int kCriterionCount = 10;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    /// Run the generator metric test on S4 exactly as typeset.
    bool as_printed_s4 = false;
    /// Certify exponential waves with the typeset (asymmetric) tan coefficient.
    bool as_printed_tan = false;
};

/// One measured quantity against its bound.
struct Check {
    std::string what;
    std::string measured;
    std::string bound;
    bool passed = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;

    [[nodiscard]] bool passed() const;
};

/// Throws std::out_of_range unless 1 <= id <= kCriterionCount.
CriterionResult run_criterion(int id, const Options& options = {});

std::vector<CriterionResult> run_all(const Options& options = {});

/// "PASS  3  product-identity  <check>: <measured> (<bound>); ..."
std::string format_line(const CriterionResult& r);

}  // namespace latwave::acceptance
