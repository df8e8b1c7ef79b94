#include <benchmark/benchmark.h>

#include "stratq/planner.hpp"
#include "stratq/rng.hpp"
#include "stratq/ruin.hpp"
#include "stratq/simulate.hpp"
#include "stratq/strategic.hpp"

using namespace stratq;

namespace
{

ModelParams example()
{
    return validate_params(RawParams{0.5, 0.4, 1.0, 4.3, 1.0, 20.0, 1.0});
}

void BM_Philox(benchmark::State& state)
{
    RandomStream s(1, 0, 0);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(s.next_u64());
    }
}
BENCHMARK(BM_Philox);

void BM_RuinProbability(benchmark::State& state)
{
    const RuinSpec spec{0.37, 25, 17};
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(ruin_probability(spec));
    }
}
BENCHMARK(BM_RuinProbability);

void BM_ComputeThresholds(benchmark::State& state)
{
    const ModelParams p = example();
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(compute_thresholds(p));
    }
}
BENCHMARK(BM_ComputeThresholds);

// Trapezoid solve; state count grows like m_star * n.
void BM_SolveTrapezoid(benchmark::State& state)
{
    const auto m = state.range(0);
    const TrapezoidSpec spec{m, 4 * m, 0.6, 0.5, 1.0};
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(solve_trapezoid(spec));
    }
    state.SetComplexityN(m);
}
BENCHMARK(BM_SolveTrapezoid)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_BPlannerScan(benchmark::State& state)
{
    const ModelParams p = example();
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(b_planner_scan(p));
    }
}
BENCHMARK(BM_BPlannerScan);

void BM_SimulateEvents(benchmark::State& state)
{
    const ModelParams p = example();
    const StrategyPolicy pol = equilibrium_policy(compute_thresholds(p));
    SimConfig c;
    c.replications = 1;
    c.max_events = state.range(0);
    c.threads = 1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(run_simulation(p, pol, c));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEvents)->Arg(100'000);

void BM_TaggedReplications(benchmark::State& state)
{
    const ModelParams p = example();
    const ThresholdSet th = compute_thresholds(p);
    TaggedScenario s;
    s.ahead = QueueState{0, 8};
    s.a_cap = th.a_equilibrium.value;
    s.stay_limit = th.b_stay;
    SimConfig c;
    c.replications = static_cast<int>(state.range(0));
    c.threads = 1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(estimate_tagged_metrics(s, p, c));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TaggedReplications)->Arg(10'000);

}  // namespace
BENCHMARK_MAIN();
