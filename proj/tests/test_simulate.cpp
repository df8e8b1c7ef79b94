#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "stratq/errors.hpp"
#include "stratq/planner.hpp"
#include "stratq/simulate.hpp"

using namespace stratq;

namespace
{

ModelParams params(double lambda_a, double lambda_b, double reward_a, double reward_b)
{
    return validate_params(RawParams{lambda_a, lambda_b, 1.0, reward_a, 1.0, reward_b, 1.0});
}

SimConfig config(int reps, std::int64_t events, std::uint64_t seed = 42)
{
    SimConfig c;
    c.seed = seed;
    c.replications = reps;
    c.max_events = events;
    return c;
}

double z(double a, double b, double se)
{
    return std::abs(a - b) / se;
}

}  // namespace

TEST(SimConfig, Validation)
{
    SimConfig c = config(1, 100);
    EXPECT_NO_THROW(c.validate());
    c.max_time = 5.0;
    EXPECT_THROW(c.validate(), Error);
    c = config(0, 100);
    EXPECT_THROW(c.validate(), Error);
    c = config(1, 100);
    c.warmup = 1.0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Simulation, MM1MeanSojourn)
{
    const ModelParams p = params(0.5, 0.0, 5, 1);
    const SimStats st = run_simulation(p, open_policy(), config(10, 100'000));
    const Estimate s = st.of(CustomerClass::A).mean_sojourn;
    EXPECT_LE(z(s.mean, 2.0, s.se), 3.0) << s.mean << " +- " << s.se;
    EXPECT_TRUE(st.conservation_ok);
    EXPECT_TRUE(st.time_monotone);
}

TEST(Simulation, GeometricOccupancyChiSquare)
{
    const double rho = 0.5;
    SimConfig c = config(10, 100'000, 7);
    c.snapshot_interval = 40.0;  // well past the relaxation time, so snapshots are nearly independent
    const SimStats st = run_simulation(params(rho, 0.0, 5, 1), open_policy(), c);
    std::vector<double> counts(8, 0.0);
    double total = 0.0;
    for (const auto& [state, count] : st.snapshots)
    {
        EXPECT_EQ(state.second, 0);
        counts[static_cast<std::size_t>(std::min(state.first, 7))] += static_cast<double>(count);
        total += static_cast<double>(count);
    }
    ASSERT_GT(total, 5'000.0);
    double chi2 = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k)
    {
        const double prob = k < 7 ? (1 - rho) * std::pow(rho, static_cast<double>(k)) : std::pow(rho, 7.0);
        const double expected = prob * total;
        chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    EXPECT_GT(p_value, 0.01) << "chi2 = " << chi2;

    // The time-weighted occupancy tells the same story.
    double p0 = 0.0;
    for (const auto& [state, frac] : st.occupancy)
    {
        if (state.first == 0)
        {
            p0 += frac;
        }
    }
    EXPECT_NEAR(p0, 1 - rho, 0.01);
}

TEST(Simulation, Deterministic)
{
    const ModelParams p = params(0.6, 0.5, 4.3, 20);
    const StrategyPolicy pol = equilibrium_policy(compute_thresholds(p));
    SimConfig c = config(6, 20'000);
    c.snapshot_interval = 3.0;
    c.threads = 1;
    const SimStats a = run_simulation(p, pol, c);
    c.threads = 4;
    const SimStats b = run_simulation(p, pol, c);
    EXPECT_EQ(a.replication_total_welfare, b.replication_total_welfare);
    EXPECT_EQ(a.occupancy, b.occupancy);
    EXPECT_EQ(a.snapshots, b.snapshots);
    EXPECT_EQ(a.events, b.events);
    for (CustomerClass k : {CustomerClass::A, CustomerClass::B})
    {
        EXPECT_EQ(a.of(k).arrivals, b.of(k).arrivals);
        EXPECT_EQ(a.of(k).served, b.of(k).served);
        EXPECT_EQ(a.of(k).reneged, b.of(k).reneged);
        EXPECT_EQ(a.of(k).mean_sojourn.mean, b.of(k).mean_sojourn.mean);
    }
    c.seed = 43;
    EXPECT_NE(run_simulation(p, pol, c).replication_total_welfare, a.replication_total_welfare);
}

TEST(Simulation, ConservationUnderEveryPolicy)
{
    const ModelParams p = params(0.8, 0.7, 4.3, 20);
    const ThresholdSet th = compute_thresholds(p);
    for (const StrategyPolicy& pol : {open_policy(), equilibrium_policy(th), global_policy(global_thresholds(p)),
                                      class_planner_policy(a_planner_threshold(p).value, b_planner_threshold(p))})
    {
        SimConfig c = config(3, 30'000);
        c.max_events = 0;
        c.max_time = 5'000.0;
        const SimStats st = run_simulation(p, pol, c);
        EXPECT_TRUE(st.conservation_ok) << pol.name;
        EXPECT_TRUE(st.time_monotone) << pol.name;
        for (CustomerClass k : {CustomerClass::A, CustomerClass::B})
        {
            const ClassSummary& s = st.of(k);
            EXPECT_EQ(s.arrivals, s.served + s.balked + s.reneged + s.in_system_end) << pol.name;
        }
        if (pol.name == "open")
        {
            EXPECT_EQ(st.of(CustomerClass::B).reneged, 0);
        }
        else
        {
            // Occupancy never exceeds what the thresholds allow.
            for (const auto& [state, frac] : st.occupancy)
            {
                EXPECT_LE(pol.priority == CustomerClass::A ? state.first : state.second, pol.priority_cap);
            }
        }
    }
}

TEST(Simulation, ResumeModesAgree)
{
    for (const ModelParams& p : {params(0.5, 0.4, 4.3, 20), params(0.9, 0.6, 2.6, 1.7), params(0.3, 0.9, 9, 40)})
    {
        const StrategyPolicy pol = equilibrium_policy(compute_thresholds(p));
        SimConfig c = config(20, 50'000, 5);
        const SimStats redraw = run_simulation(p, pol, c);
        c.resume = ResumeMode::Residual;
        c.seed = 6;  // independent sample
        const SimStats residual = run_simulation(p, pol, c);
        for (CustomerClass k : {CustomerClass::A, CustomerClass::B})
        {
            const Estimate a = redraw.of(k).mean_sojourn;
            const Estimate b = residual.of(k).mean_sojourn;
            EXPECT_LE(z(a.mean, b.mean, std::hypot(a.se, b.se)), 3.0);
            const Estimate wa = redraw.of(k).welfare_rate;
            const Estimate wb = residual.of(k).welfare_rate;
            EXPECT_LE(z(wa.mean, wb.mean, std::hypot(wa.se, wb.se)), 3.0);
        }
    }
}

TEST(Tagged, SingleServiceNoRisk)
{
    TaggedScenario s;
    s.stay_limit = 1;
    const TaggedEstimate e = estimate_tagged_metrics(s, params(1e-300, 0.0, 5, 1), config(20'000, 0));
    EXPECT_EQ(e.p_hat, 1.0);
    EXPECT_LE(z(e.e_hat, 1.0, e.e_se), 3.0);
}

TEST(Tagged, PositionTwo)
{
    TaggedScenario s;
    s.ahead = QueueState{0, 1};
    s.stay_limit = 2;
    const TaggedEstimate e = estimate_tagged_metrics(s, params(0.5, 0.0, 5, 1), config(100'000, 0));
    EXPECT_LE(z(e.p_hat, 4.0 / 7.0, e.p_se), 3.0);
    EXPECT_GE(e.p_hat, 0.0);
    EXPECT_LE(e.p_hat, 1.0);
    EXPECT_GE(e.e_hat, 0.0);
}

TEST(Tagged, MarginalHighRatioJoinerBreaksEven)
{
    const ModelParams p = params(0.5, 0.4, 2, 10);
    const ThresholdSet th = compute_thresholds(p);
    ASSERT_EQ(th.regime, Regime::HighRatio);
    TaggedScenario s;
    s.ahead = QueueState{0, static_cast<int>(th.high->t - 1)};
    s.a_cap = th.a_equilibrium.value;
    s.stay_limit = th.b_stay;
    const TaggedEstimate e = estimate_tagged_metrics(s, p, config(100'000, 0));
    EXPECT_GE(e.payoff, -3.0 * e.payoff_se);
}

TEST(Tagged, TaggedAOnlyWaitsForAAhead)
{
    TaggedScenario s;
    s.tagged = CustomerClass::A;
    s.ahead = QueueState{2, 5};
    const TaggedEstimate e = estimate_tagged_metrics(s, params(0.5, 0.4, 5, 1), config(50'000, 0));
    EXPECT_EQ(e.p_hat, 1.0);
    EXPECT_LE(z(e.e_hat, 3.0, e.e_se), 3.0);
}

TEST(Audit, HighRatioExampleHasNoProfitableDeviation)
{
    const ModelParams p = params(1.0, 0.4, 3, 20);
    const AuditReport rep = best_response_audit(p, fs_equilibrium_profile(p), config(50'000, 0));
    EXPECT_FALSE(rep.entries.empty());
    EXPECT_TRUE(rep.ok());
}

TEST(Welfare, NaorReduction)
{
    const ModelParams p = params(0.9, 0.0, 8, 1);
    const auto rows = welfare_compare(p, config(10, 50'000));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].scenario, "equilibrium");
    const Estimate d = rows[1].total_minus_equilibrium;
    EXPECT_GE(d.mean, -3.0 * d.se);
    EXPECT_EQ(rows[0].total_minus_equilibrium.mean, 0.0);
}

TEST(Welfare, GlobalPlanBeatsEquilibriumInHighRatio)
{
    const auto rows = welfare_compare(params(0.5, 0.4, 4.3, 20), config(8, 50'000));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GE(rows[1].total_minus_equilibrium.mean, -3.0 * rows[1].total_minus_equilibrium.se);
}
