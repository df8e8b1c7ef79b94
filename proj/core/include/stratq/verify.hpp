#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "stratq/model.hpp"

namespace stratq
{

enum class Grid
{
    Small,
    Full,
};

struct VerifyOptions
{
    Grid grid = Grid::Full;
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    // Library quantities to perturb before comparison (see known_faults);
    // proves a check can fail.
    std::set<std::string> faults;
};

struct CheckResult
{
    int criterion = 0;
    std::string name;
    double tolerance = 0.0;
    double observed = 0.0;  // worst deviation, in the units of `tolerance`
    double seconds = 0.0;
    double time_limit = 0.0;
    bool within_tolerance = false;
    std::string detail;

    bool pass() const noexcept { return within_tolerance && seconds < time_limit; }
};

inline constexpr int kCriterionCount = 10;

// Fault names understood by VerifyOptions::faults.
const std::vector<std::string>& known_faults();

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options);
std::vector<CheckResult> run_all_checks(const VerifyOptions& options);

// The parameter sets the sign-change, G and audit checks sweep.
std::vector<RawParams> strategic_grid();

}  // namespace stratq
