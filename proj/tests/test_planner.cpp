#include <gtest/gtest.h>

#include <cmath>

#include "stratq/errors.hpp"
#include "stratq/planner.hpp"
#include "stratq/series.hpp"

using namespace stratq;

namespace
{

ModelParams params(double lambda_a, double lambda_b, double reward_a, double reward_b, double mu = 1.0)
{
    return validate_params(RawParams{lambda_a, lambda_b, mu, reward_a, 1.0, reward_b, 1.0});
}

}  // namespace

TEST(APlanner, Threshold)
{
    EXPECT_EQ(a_planner_threshold(params(0.5, 0.3, 4, 2)).value, 2);
    EXPECT_EQ(a_planner_threshold(params(0.5, 0.3, 1, 2)).value, 1);
    EXPECT_EQ(a_planner_threshold(params(1.0, 0.3, 6, 2)).value, 3);
}

TEST(GlobalPlan, NoBTrafficIsSingleClassOptimum)
{
    for (double lam : {0.2, 0.9, 1.0, 1.7})
    {
        const ModelParams p = params(lam, 0.0, 7.5, 30.0);
        const GlobalPlan plan = global_thresholds(p);
        const auto social = naor_social_threshold(7.5, 1.0, 1.0, lam);
        EXPECT_EQ(plan.favored_class, CustomerClass::A);
        EXPECT_EQ(plan.favored_threshold.value, social.value);
        EXPECT_EQ(plan.total_threshold.value, social.value);
    }
}

TEST(GlobalPlan, FavorsHigherRatio)
{
    const GlobalPlan plan = global_thresholds(params(0.5, 0.25, 4, 3));
    EXPECT_EQ(plan.favored_class, CustomerClass::A);
    EXPECT_EQ(plan.favored_threshold.value, 2);
    // Largest n with gamma_0.75(n) <= 3, by a separate scan.
    std::int64_t n = 0;
    while (gamma_sum(0.75, n + 1) <= 3.0)
    {
        ++n;
    }
    EXPECT_EQ(plan.total_threshold.value, n);
    EXPECT_EQ(global_thresholds(params(0.5, 0.25, 4, 4)).favored_class, CustomerClass::A);
    EXPECT_EQ(global_thresholds(params(0.5, 0.25, 4, 5)).favored_class, CustomerClass::B);
}

TEST(Trapezoid, BoundaryValues)
{
    const TrapezoidSolution sol = solve_trapezoid(TrapezoidSpec{2, 5, 0.6, 0.5, 1.0});
    const auto origin = static_cast<std::size_t>(sol.layout.origin);
    EXPECT_EQ(sol.result.eta[origin], 1.0);
    EXPECT_EQ(sol.result.kappa[origin], 0.0);
    EXPECT_EQ(sol.result.eta[static_cast<std::size_t>(sol.layout.renege)], 0.0);
    EXPECT_THROW(build_trapezoid(TrapezoidSpec{3, 3, 0.6, 0.5, 1.0}), Error);
}

TEST(Trapezoid, SolvedEtaSatisfiesPrintedSystem)
{
    for (std::int64_t m = 1; m <= 6; ++m)
    {
        for (std::int64_t n = m + 1; n <= 12; ++n)
        {
            for (const auto& [la, lb] : {std::pair{0.6, 0.5}, std::pair{0.2, 1.3}, std::pair{1.0, 0.0}})
            {
                const TrapezoidSpec spec{m, n, la, lb, 1.0};
                const TrapezoidSolution sol = solve_trapezoid(spec);
                EXPECT_LE(trapezoid_eta_residual(sol, spec), 1e-9) << m << " " << n;
                for (double e : sol.result.eta)
                {
                    EXPECT_GE(e, 0.0);
                    EXPECT_LE(e, 1.0);
                }
                const PlannerMetrics pm = b_planner_metrics(spec, QueueState{0, static_cast<int>(n)});
                EXPECT_NEAR(pm.p, pm.p_direct, 1e-12);
                EXPECT_NEAR(pm.e, pm.e_direct, 1e-10 * pm.e_direct);
            }
        }
    }
}

TEST(Trapezoid, NoBTrafficCollapsesToCappedWalk)
{
    // With A capped at m_star and no B arrivals, the tagged customer is
    // served iff it first climbs through the triangle.
    for (double la : {0.4, 1.0, 1.6})
    {
        const TrapezoidSpec spec{3, 7, la, 0.0, 1.0};
        const PlannerMetrics pm = b_planner_metrics(spec, QueueState{0, 7});
        EXPECT_NEAR(pm.p, 1.0 / geometric_sum(la, 4), 1e-13);
    }
}

TEST(Trapezoid, CornerUsesDirectSolve)
{
    const TrapezoidSpec spec{2, 6, 0.6, 0.5, 1.0};
    const PlannerMetrics pm = b_planner_metrics(spec, QueueState{2, 4});
    EXPECT_EQ(pm.p, pm.p_direct);
    EXPECT_EQ(pm.e, pm.e_direct);
    EXPECT_THROW(b_planner_metrics(spec, QueueState{3, 3}), Error);
    EXPECT_THROW(b_planner_metrics(spec, QueueState{0, 5}), Error);
}

TEST(BPlanner, CoincidesWithGlobalWhenBRatioIsLower)
{
    const ModelParams p = params(0.5, 0.4, 9, 3);
    const BPlannerScan scan = b_planner_scan(p);
    EXPECT_TRUE(scan.coincides_with_global);
    EXPECT_EQ(scan.threshold, global_thresholds(p).total_threshold.value);
}

TEST(BPlanner, ExhaustiveScanOracle)
{
    const ModelParams p = params(0.6, 0.3, 1.5, 9);
    const std::int64_t m = a_planner_threshold(p).value;
    ASSERT_EQ(m, 1);
    const double rho = utilizations(p).rho;
    std::int64_t last_nonnegative = 0;
    for (std::int64_t n = 1; n <= 20; ++n)
    {
        double value;
        if (n <= m)
        {
            const double s = geometric_sum(rho, n + 1);
            value = p.reward_b() / s - p.cost_b() * gamma_sum(rho, n) / (p.mu() * s);
        }
        else
        {
            const TrapezoidSpec spec = TrapezoidSpec::from_params(p, n);
            const TrapezoidSolution sol = solve_trapezoid(spec);
            const auto entry = static_cast<std::size_t>(sol.layout.index(0, n));
            value = p.reward_b() * sol.result.eta[entry] - p.cost_b() * sol.result.kappa[entry];
        }
        if (value >= 0.0)
        {
            last_nonnegative = n;
        }
    }
    ASSERT_LT(last_nonnegative, 20);
    EXPECT_EQ(b_planner_threshold(p), last_nonnegative);
}

TEST(BPlanner, SingleCrossingProbe)
{
    for (double la : {0.3, 0.7, 1.2})
    {
        for (double lb : {0.2, 0.6})
        {
            for (double rb : {6.0, 15.0, 40.0})
            {
                const BPlannerScan scan = b_planner_scan(params(la, lb, 3.0, rb));
                EXPECT_TRUE(scan.single_crossing) << la << " " << lb << " " << rb;
                if (!scan.values.empty())
                {
                    EXPECT_GE(scan.values[static_cast<std::size_t>(scan.threshold - 1)], 0.0);
                }
            }
        }
    }
}
