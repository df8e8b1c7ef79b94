#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratq/model.hpp"
#include "stratq/ruin.hpp"
#include "stratq/strategic.hpp"

namespace stratq
{

ThresholdBracket a_planner_threshold(const ModelParams& params);

struct GlobalPlan
{
    CustomerClass favored_class = CustomerClass::A;
    ThresholdBracket favored_threshold;  // cap on the favored class
    ThresholdBracket total_threshold;    // cap on total occupancy
    std::string eviction_rule;
};

GlobalPlan global_thresholds(const ModelParams& params);

// Tagged B customer at Position n with LCFS among B customers: A arrivals
// join below m_star and go ahead; B arrivals always go ahead; the tagged customer reneges on
// reaching Position n + 1.
struct TrapezoidSpec
{
    std::int64_t m_star = 1;
    std::int64_t n = 2;
    double lambda_a = 0.0;
    double lambda_b = 0.0;
    double mu = 1.0;

    static TrapezoidSpec from_params(const ModelParams& params, std::int64_t n);
};

// State (i, j): i A customers in system, j B customers at or ahead of
// the tagged one, i + j = its Position. The rectangle is 0 <= i <= m_star,
// 1 <= j <= n - m_star; the triangle above it is i + j <= n.
struct TrapezoidChain
{
    AbsorbingChainSpec chain;
    int origin = -1;  // (0, 0): tagged customer served
    int renege = -1;
    std::int64_t m_star = 0;
    std::int64_t n = 0;

    // Index of (i, j), or -1 outside the trapezoid.
    int index(std::int64_t i, std::int64_t j) const;

    std::vector<int> grid;  // row-major over (i, j), j in [0, n]
};

// Throws DegenerateTrapezoid when n <= m_star.
TrapezoidChain build_trapezoid(const TrapezoidSpec& spec);

struct TrapezoidSolution
{
    TrapezoidChain layout;
    AbsorptionResult result;
};

TrapezoidSolution solve_trapezoid(const TrapezoidSpec& spec);

struct PlannerMetrics
{
    double p = 0.0;
    double e = 0.0;
    double p_direct = 0.0;  // eta at the entry state, no triangle prefactor
    double e_direct = 0.0;
};

// Served probability and expected sojourn for a tagged B entering at `state`
// (state.total() == spec.n). For n <= m_star the walk is one-dimensional
// under the combined load and the position formulas apply.
PlannerMetrics b_planner_metrics(const TrapezoidSpec& spec, QueueState state);

// Largest residual of the rectangle equations, written over the uniformized
// rate lambda_a + lambda_b + mu with the top boundary collapsed onto
// eta(0, n - m_star) through the combined load.
double trapezoid_eta_residual(const TrapezoidSolution& solved, const TrapezoidSpec& spec);

struct BPlannerScan
{
    std::int64_t threshold = 0;
    bool coincides_with_global = false;
    bool single_crossing = true;
    std::vector<double> values;  // R_B P - C_B E at n = 1, 2, ...
};

inline constexpr std::int64_t kPlannerScanLimit = 10'000;

BPlannerScan b_planner_scan(const ModelParams& params);
std::int64_t b_planner_threshold(const ModelParams& params);

}  // namespace stratq
