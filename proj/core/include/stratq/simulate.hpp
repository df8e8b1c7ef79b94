#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stratq/model.hpp"
#include "stratq/planner.hpp"
#include "stratq/strategic.hpp"

namespace stratq
{

inline constexpr std::int64_t kNoLimit = std::numeric_limits<std::int64_t>::max();

// Admission and renege rules. One class is served first (preemptively);
// the other queues FCFS behind it. A low-class customer's Position is the
// priority count plus its rank in its own class, so only a priority
// admission can push it back, and only the last one can cross the limit.
struct StrategyPolicy
{
    std::string name = "open";
    CustomerClass priority = CustomerClass::A;
    std::int64_t priority_cap = kNoLimit;    // priority joins iff its count < cap
    std::int64_t other_join_max = kNoLimit;  // low class joins iff observed total <= this
    std::int64_t other_stay_max = kNoLimit;  // low class stays iff Position <= this

    bool priority_join(std::int64_t observed_priority) const noexcept { return observed_priority < priority_cap; }
    bool other_join(std::int64_t observed_total) const noexcept { return observed_total <= other_join_max; }
    bool other_stay(Position p) const noexcept { return p.value() <= other_stay_max; }
};

StrategyPolicy open_policy();
StrategyPolicy equilibrium_policy(const ThresholdSet& thresholds);
StrategyPolicy global_policy(const GlobalPlan& plan);
StrategyPolicy class_planner_policy(std::int64_t a_threshold, std::int64_t b_threshold);

enum class ResumeMode
{
    Redraw,    // fresh exponential on every (re)start of service
    Residual,  // preempted customer keeps its remaining work
};

struct SimConfig
{
    std::uint64_t seed = 1;
    int replications = 1;
    std::int64_t max_events = 0;  // exactly one of max_events, max_time is positive
    double max_time = 0.0;
    double warmup = 0.2;
    double snapshot_interval = 0.0;  // 0 disables snapshots
    ResumeMode resume = ResumeMode::Redraw;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

inline constexpr std::int64_t kOccupancyGuard = 10'000'000;

struct Estimate
{
    double mean = 0.0;
    double se = 0.0;
};

struct ClassSummary
{
    std::int64_t arrivals = 0;
    std::int64_t served = 0;
    std::int64_t balked = 0;
    std::int64_t reneged = 0;
    std::int64_t in_system_end = 0;
    Estimate mean_sojourn;  // served customers, after warmup
    Estimate welfare_rate;
};

using StateKey = std::pair<int, int>;  // (n_a, n_b)

struct SimStats
{
    std::array<ClassSummary, 2> per_class;
    Estimate total_welfare_rate;
    std::map<StateKey, double> occupancy;            // time fraction after warmup
    std::map<StateKey, std::int64_t> snapshots;      // states seen at regular epochs
    std::vector<double> replication_total_welfare;  // index order
    std::int64_t events = 0;
    int replications = 0;
    bool conservation_ok = true;
    bool time_monotone = true;

    const ClassSummary& of(CustomerClass c) const { return per_class[static_cast<std::size_t>(c)]; }
};

SimStats run_simulation(const ModelParams& params, const StrategyPolicy& policy, const SimConfig& config);

// A single tracked customer. For a tagged B the walk runs on (A in system,
// B ahead): A arrivals join below a_cap and go ahead; B arrivals go ahead
// only when lcfs_b is set; the tagged customer reneges on reaching
// stay_limit + 1. B customers ahead never leave before it. A tagged A only waits for the A
// customers ahead.
struct TaggedScenario
{
    CustomerClass tagged = CustomerClass::B;
    QueueState ahead;
    std::int64_t a_cap = kNoLimit;
    std::int64_t stay_limit = kNoLimit;
    bool lcfs_b = false;
};

struct TaggedEstimate
{
    double p_hat = 0.0;
    double p_se = 0.0;
    double e_hat = 0.0;
    double e_se = 0.0;
    double payoff = 0.0;  // reward * served - cost * sojourn
    double payoff_se = 0.0;
    int replications = 0;
};

TaggedEstimate estimate_tagged_metrics(const TaggedScenario& scenario, const ModelParams& params, const SimConfig& config);

struct AuditEntry
{
    CustomerClass who = CustomerClass::B;
    QueueState ahead;
    std::int64_t observed = 0;
    bool profile_joins = false;
    TaggedEstimate estimate;
    bool violation = false;
};

struct AuditReport
{
    std::vector<AuditEntry> entries;
    bool ok() const;
};

// Join-versus-balk payoffs next to every threshold. A violation is a payoff
// beyond 3 standard errors on the wrong side of zero.
AuditReport best_response_audit(const ModelParams& params, const EquilibriumProfile& profile, const SimConfig& config);

struct WelfareRow
{
    std::string scenario;
    Estimate welfare_a;
    Estimate welfare_b;
    Estimate total;
    // Paired against the equilibrium row on common random numbers.
    Estimate total_minus_equilibrium;
};

std::vector<WelfareRow> welfare_compare(const ModelParams& params, const SimConfig& config);

}  // namespace stratq
