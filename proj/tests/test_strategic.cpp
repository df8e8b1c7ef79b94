#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stratq/errors.hpp"
#include "stratq/oracles.hpp"
#include "stratq/series.hpp"
#include "stratq/strategic.hpp"

using namespace stratq;

namespace
{

constexpr double kTiny = 1e-300;  // stands in for lambda_a -> 0

ModelParams params(double lambda_a, double reward_a, double reward_b, double lambda_b = 0.4, double mu = 1.0)
{
    return validate_params(RawParams{lambda_a, lambda_b, mu, reward_a, 1.0, reward_b, 1.0});
}

// Payoff of a tagged B with `ahead` B customers in front (none A), A capped
// at `cap`, reneging past Position `stay`; straight from the chain.
double chain_payoff(const ModelParams& p, int cap, int stay, int ahead)
{
    const auto r = solve_absorption(oracle::capped_walk(p.lambda_a(), p.mu(), cap, stay));
    const auto s = static_cast<std::size_t>(oracle::capped_walk_index(cap, stay, 0, ahead));
    return p.reward_b() * r.eta[s] - p.cost_b() * r.kappa[s];
}

std::vector<ModelParams> random_grid(int count, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> lam(0.05, 2.0), ra(1.0, 8.0), rb(1.0, 60.0);
    std::vector<ModelParams> out;
    while (static_cast<int>(out.size()) < count)
    {
        out.push_back(params(lam(gen), ra(gen), rb(gen)));
    }
    return out;
}

}  // namespace

TEST(Naor, Threshold)
{
    EXPECT_EQ(naor_threshold(10, 2, 1), 5);
    EXPECT_EQ(naor_threshold(1, 1, 1), 1);
    EXPECT_EQ(naor_threshold(10, 3, 1), 3);
}

TEST(Naor, SocialThreshold)
{
    EXPECT_EQ(naor_social_threshold(4, 1, 1, 0.5).value, 2);
    for (double rho : {0.0, 0.4, 1.0, 3.0})
    {
        EXPECT_EQ(naor_social_threshold(1, 1, 1, rho).value, 1);
    }
    EXPECT_EQ(naor_social_threshold(6, 1, 1, 1.0).value, 3);
    // An independent scan over the printed closed form.
    const auto t = naor_social_threshold(4, 1, 1, 0.5);
    EXPECT_LE(oracle::printed::gamma(0.5, 2), 4.0);
    EXPECT_GT(oracle::printed::gamma(0.5, 3), 4.0);
    EXPECT_DOUBLE_EQ(t.at, 2.5);
    EXPECT_DOUBLE_EQ(t.next, 4.25);
}

TEST(Naor, SocialNeverExceedsIndividual)
{
    for (const ModelParams& p : random_grid(300, 3))
    {
        const ThresholdSet th = compute_thresholds(p);
        EXPECT_LE(th.a_social.value, th.a_equilibrium.value);
    }
}

TEST(Position, ServedProbability)
{
    EXPECT_EQ(served_prob_position(Position(1), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(served_prob_position(Position(1), 1.0), 0.5);
    EXPECT_NEAR(served_prob_position(Position(2), 0.5), 4.0 / 7.0, 1e-15);
    const auto r = solve_absorption(oracle::position_walk(0.5, 1.0, 2));
    EXPECT_NEAR(r.eta[2], 4.0 / 7.0, 1e-15);
}

TEST(Position, Sojourn)
{
    EXPECT_DOUBLE_EQ(sojourn_position(Position(1), 0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(sojourn_position(Position(2), 0.0, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(sojourn_position(Position(1), 1.0, 1.0), 0.5);
}

TEST(Position, NetBenefit)
{
    EXPECT_NEAR(net_benefit_semi(Position(1), params(kTiny, 2, 1)), 0.0, 1e-15);
    EXPECT_NEAR(net_benefit_semi(Position(1), params(1.0, 2, 2)), 0.5, 1e-15);
    EXPECT_LT(net_benefit_semi(Position(1000), params(0.5, 2, 3)), 0.0);
    // Decreasing in Position.
    const ModelParams p = params(0.7, 2, 9);
    for (int k = 1; k < 60; ++k)
    {
        EXPECT_GT(net_benefit_semi(Position(k), p), net_benefit_semi(Position(k + 1), p));
    }
}

TEST(SemiStrategic, Threshold)
{
    EXPECT_EQ(semi_strategic_threshold(params(0.5, 2, 4)).value, 2);
    EXPECT_EQ(semi_strategic_threshold(params(kTiny, 2, 4)).value, 4);
    try
    {
        semi_strategic_threshold(params(1.0, 2, 4));
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::UnstableSemiStrategic);
    }
}

TEST(Rectangle, ClearTime)
{
    EXPECT_EQ(rect_expected_clear_time(0, 0, 3, 0.7, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(rect_expected_clear_time(1, 0, 1, 1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(rect_expected_clear_time(0, 1, 1, 0.5, 1.0), 1.5);
    const auto r = solve_absorption(oracle::rectangle_walk(0.5, 1.0, 1, 1));
    EXPECT_NEAR(r.kappa[static_cast<std::size_t>(oracle::rectangle_index(1, 1, 0, 1))], 1.5, 1e-14);
    EXPECT_THROW(rect_expected_clear_time(3, 0, 2, 0.5, 1.0), Error);
}

TEST(FullyStrategic, Regime)
{
    EXPECT_EQ(fs_regime(params(1.0, 3, 20)), Regime::HighRatio);
    EXPECT_EQ(fs_regime(params(1.0, 3, 5)), Regime::LowRatio);
    EXPECT_EQ(fs_regime(params(1.0, 3, 6)), Regime::HighRatio);
}

TEST(FullyStrategic, LowThreshold)
{
    EXPECT_EQ(fs_threshold_low(params(1.0, 3, 5)).value, 1);
    EXPECT_EQ(fs_threshold_low(params(0.5, 3.5, 4)).value, 1);
    EXPECT_EQ(fs_threshold_low(params(kTiny, 5.5, 4)).value, 3);
    EXPECT_THROW(fs_threshold_low(params(1.0, 3, 20)), Error);
}

TEST(FullyStrategic, HighThresholds)
{
    auto h = fs_thresholds_high(params(1.0, 3, 20));
    EXPECT_EQ(h.v, 3);
    EXPECT_EQ(h.t, 6);
    h = fs_thresholds_high(params(0.5, 2, 10));
    EXPECT_EQ(h.v, 4);
    EXPECT_EQ(h.t, 6);
    // Ratio exactly gamma(M): the bracket vanishes.
    h = fs_thresholds_high(params(0.5, 2, 2.5));
    EXPECT_EQ(h.v, 0);
    EXPECT_EQ(h.t, 2);
    EXPECT_THROW(fs_thresholds_high(params(1.0, 3, 5)), Error);
}

TEST(FullyStrategic, ServedProbability)
{
    const ModelParams p = params(0.5, 2, 10);
    const ThresholdSet th = compute_thresholds(p);
    EXPECT_NEAR(fs_served_prob(th.high->t - 1, p, th), 1.0 / geometric_sum(0.5, 3), 1e-15);
    EXPECT_NEAR(fs_served_prob(th.high->t - 1, p, th), served_prob_position(Position(2), 0.5), 1e-15);

    const ModelParams unit = params(1.0, 3, 20);
    const ThresholdSet tu = compute_thresholds(unit);
    EXPECT_NEAR(fs_served_prob(4, unit, tu), 0.5, 1e-15);

    const ModelParams idle = params(kTiny, 3, 20);
    const ThresholdSet ti = compute_thresholds(idle);
    for (std::int64_t n = 0; n < ti.high->t; ++n)
    {
        EXPECT_NEAR(fs_served_prob(n, idle, ti), 1.0, 1e-12);
    }
}

TEST(FullyStrategic, NetBenefitAroundThresholds)
{
    const ModelParams p = params(0.5, 2, 10);
    const ThresholdSet th = compute_thresholds(p);
    const std::int64_t t = th.high->t;
    EXPECT_GE(fs_net_benefit(t - 1, p, th), 0.0);
    EXPECT_LT(fs_net_benefit(t, p, th), 0.0);
    const int m = static_cast<int>(th.a_equilibrium.value);
    for (std::int64_t n = 0; n < th.high->v; ++n)
    {
        EXPECT_NEAR(fs_net_benefit(n, p, th),
                    p.reward_b() - p.cost_b() * rect_expected_clear_time(0, static_cast<int>(n) + 1, m, 0.5, 1.0), 1e-12);
    }
    // Chain oracle at T - 1 and T.
    EXPECT_NEAR(fs_net_benefit(t - 1, p, th), chain_payoff(p, m, static_cast<int>(t), static_cast<int>(t - 1)), 1e-12);
    EXPECT_NEAR(fs_net_benefit(t, p, th), chain_payoff(p, m, static_cast<int>(t + 1), static_cast<int>(t)), 1e-12);
}

TEST(FullyStrategic, GValue)
{
    const ModelParams p = params(0.5, 2, 5);
    const ThresholdSet th = compute_thresholds(p);
    ASSERT_EQ(th.a_equilibrium.value, 2);
    ASSERT_EQ(th.high->v, 1);
    const double g = g_value(1, p, th);
    EXPECT_TRUE(std::isfinite(g));
    EXPECT_GT(g, 0.0);
    // Re-derived from the chain: exit time of the walk over served probability.
    const int t = static_cast<int>(th.high->t);
    const auto r = solve_absorption(oracle::capped_walk(0.5, 1.0, 2, t));
    const auto s = static_cast<std::size_t>(oracle::capped_walk_index(2, t, 0, 1));
    const auto tail = static_cast<std::size_t>(oracle::capped_walk_index(2, t, 0, 0));
    EXPECT_NEAR(g, (r.kappa[s] - r.eta[s] * r.kappa[tail]) / r.eta[s], 1e-12);
    // Identity at T - 1: G equals the clearing time of M customers.
    EXPECT_NEAR(g_value(t - 1, p, th), gamma_sum(0.5, 2) / 1.0, 1e-12);
}

TEST(Profile, Examples)
{
    const ThresholdSet high = compute_thresholds(params(1.0, 3, 20));
    EXPECT_EQ(high.b_join, 5);
    EXPECT_EQ(high.b_stay, 6);
    const ThresholdSet low = compute_thresholds(params(0.5, 3.5, 4));
    EXPECT_EQ(low.b_join, 1);
    EXPECT_EQ(low.b_stay, 2);

    const ModelParams naor = params(0.5, 5.2, 1, 0.0);
    const EquilibriumProfile prof = fs_equilibrium_profile(naor);
    EXPECT_EQ(prof.thresholds().a_equilibrium.value, 5);
    EXPECT_TRUE(prof.a_join(4));
    EXPECT_FALSE(prof.a_join(5));
}

TEST(Profile, PredicatesMatchThresholds)
{
    for (const ModelParams& p : random_grid(50, 17))
    {
        const EquilibriumProfile prof = fs_equilibrium_profile(p);
        const ThresholdSet& th = prof.thresholds();
        EXPECT_EQ(th.b_stay, th.b_join + 1);
        if (th.regime == Regime::HighRatio)
        {
            EXPECT_EQ(th.high->t, th.a_equilibrium.value + th.high->v);
        }
        for (std::int64_t n = 0; n < th.b_stay + 3; ++n)
        {
            EXPECT_EQ(prof.b_join(n), n <= th.b_join);
            EXPECT_EQ(prof.b_stay(Position(static_cast<int>(n) + 1)), n + 1 <= th.b_join + 1);
            EXPECT_EQ(prof.a_join(n), n < th.a_equilibrium.value);
        }
    }
}

TEST(Properties, SignChangesAndShiftLaw)
{
    for (const ModelParams& p : random_grid(400, 99))
    {
        const ThresholdSet th = compute_thresholds(p);
        if (th.b_semi)
        {
            const auto mb = static_cast<int>(th.b_semi->value);
            EXPECT_GE(net_benefit_semi(Position(mb), p), 0.0);
            EXPECT_LT(net_benefit_semi(Position(mb + 1), p), 0.0);
        }
        EXPECT_GE(fs_net_benefit(th.b_join, p, th), 0.0);
        EXPECT_LT(fs_net_benefit(th.b_join + 1, p, th), 0.0);
        if (th.regime == Regime::LowRatio)
        {
            const double rho = utilizations(p).rho_a;
            EXPECT_EQ(bracket_gamma(rho, p.service_value_ratio(CustomerClass::B)).index, th.b_join + 1);
        }
    }
}

TEST(Properties, GStrictlyIncreasing)
{
    int checked = 0;
    for (const ModelParams& p : random_grid(400, 123))
    {
        const ThresholdSet th = compute_thresholds(p);
        if (th.regime != Regime::HighRatio)
        {
            continue;
        }
        ++checked;
        for (std::int64_t n = th.high->v; n + 1 <= th.high->t - 1; ++n)
        {
            EXPECT_LT(g_value(n, p, th), g_value(n + 1, p, th));
        }
        const double rho = utilizations(p).rho_a;
        EXPECT_NEAR(g_value(th.high->t - 1, p, th), gamma_sum(rho, th.a_equilibrium.value), 1e-9 * gamma_sum(rho, th.a_equilibrium.value));
    }
    EXPECT_GT(checked, 50);
}
