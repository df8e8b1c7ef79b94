#include "stratq/strategic.hpp"

#include <cmath>
#include <string>

#include "stratq/errors.hpp"
#include "stratq/series.hpp"

namespace stratq
{

namespace
{

ThresholdBracket gamma_threshold(double rho, double target, std::int64_t shift)
{
    const Bracket b = bracket_gamma(rho, target, shift);
    return ThresholdBracket{b.index, gamma_real_root(rho, target) - static_cast<double>(shift), b.at, b.next};
}

struct HighRatioContext
{
    std::int64_t m;
    std::int64_t v;
    std::int64_t t;
    double rho;
    double mu;
};

HighRatioContext high_context(const ModelParams& params, const ThresholdSet& th)
{
    if (th.regime != Regime::HighRatio || !th.high)
    {
        throw Error(ErrorKind::WrongRegime, "operation needs the high-ratio regime");
    }
    return HighRatioContext{th.a_equilibrium.value, th.high->v, th.high->t, utilizations(params).rho_a, params.mu()};
}

// Served probability and sojourn for a B joining at observed total n with
// V <= n <= T - 1: exit through the 1-D walk, then the certain tail.
struct Outcome
{
    double p;
    double e;
};

Outcome high_outcome(const HighRatioContext& c, std::int64_t n)
{
    const SeriesTable tab(c.rho, c.m + 1);
    const double s_cap = tab.s(c.m + 1);
    if (n < c.v)
    {
        return {1.0, static_cast<double>(n + 1) * s_cap / c.mu};
    }
    const TwoBarrierWalk walk{c.rho, n + 1 - c.v, c.t - n};
    const double p = geometric_sum(c.rho, c.t - n) / s_cap;
    const double exit = scaled_exit_time(walk) / c.mu;
    const double tail = static_cast<double>(c.v) * s_cap / c.mu;
    return {p, exit + p * tail};
}

void check_observed(std::int64_t n)
{
    if (n < 0)
    {
        throw Error(ErrorKind::DomainError, "observed total must be nonnegative");
    }
}

}  // namespace

std::int64_t naor_threshold(double reward, double cost, double mu)
{
    if (!(reward > 0.0 && cost > 0.0 && mu > 0.0))
    {
        throw Error(ErrorKind::NonPositiveRate, "reward, cost and mu must be positive");
    }
    const double ratio = reward * mu / cost;
    if (ratio < 1.0)
    {
        throw Error(ErrorKind::RewardTooSmall, "reward * mu < cost");
    }
    if (ratio > static_cast<double>(kMaxThreshold))
    {
        throw Error(ErrorKind::ThresholdOverflow, "Naor threshold exceeds " + std::to_string(kMaxThreshold));
    }
    return static_cast<std::int64_t>(std::floor(ratio));
}

ThresholdBracket naor_social_threshold(double reward, double cost, double mu, double rho)
{
    naor_threshold(reward, cost, mu);
    if (!(rho >= 0.0) || !std::isfinite(rho))
    {
        throw Error(ErrorKind::DomainError, "load factor must be finite and nonnegative");
    }
    return gamma_threshold(rho, reward * mu / cost, 0);
}

double served_prob_position(Position p, double rho_a)
{
    return 1.0 / geometric_sum(rho_a, p.value() + 1);
}

double sojourn_position(Position p, double rho_a, double mu)
{
    SeriesAccumulator acc(rho_a);
    acc.advance_to(p.value());
    const double g = acc.gamma();
    acc.advance();
    return g / (mu * acc.partial_sum());
}

double net_benefit_semi(Position p, const ModelParams& params)
{
    const double rho_a = utilizations(params).rho_a;
    return params.reward_b() * served_prob_position(p, rho_a) - params.cost_b() * sojourn_position(p, rho_a, params.mu());
}

ThresholdBracket semi_strategic_threshold(const ModelParams& params)
{
    const double rho_a = utilizations(params).rho_a;
    if (rho_a >= 1.0 - kUnitLoadTolerance)
    {
        throw Error(ErrorKind::UnstableSemiStrategic, "rho_a >= 1: class A alone saturates the server");
    }
    return gamma_threshold(rho_a, params.service_value_ratio(CustomerClass::B), 0);
}

double rect_expected_clear_time(int n_a, int n_b, int cap, double rho_a, double mu)
{
    if (n_a < 0 || n_b < 0 || cap < 0)
    {
        throw Error(ErrorKind::DomainError, "counts and cap must be nonnegative");
    }
    if (n_a > cap)
    {
        throw Error(ErrorKind::CapViolation, "n_a = " + std::to_string(n_a) + " exceeds cap " + std::to_string(cap));
    }
    const SeriesTable tab(rho_a, cap + 1);
    return (tab.gamma(cap) - tab.gamma(cap - n_a) + n_b * tab.s(cap + 1)) / mu;
}

const char* to_string(Regime r) noexcept
{
    return r == Regime::HighRatio ? "high_ratio" : "low_ratio";
}

Regime fs_regime(const ModelParams& params)
{
    const std::int64_t m = naor_threshold(params.reward_a(), params.cost_a(), params.mu());
    const double x = params.service_value_ratio(CustomerClass::B);
    return x >= gamma_sum(utilizations(params).rho_a, m) ? Regime::HighRatio : Regime::LowRatio;
}

ThresholdBracket fs_threshold_low(const ModelParams& params)
{
    if (fs_regime(params) != Regime::LowRatio)
    {
        throw Error(ErrorKind::WrongRegime, "low-ratio threshold requested in the high-ratio regime");
    }
    return gamma_threshold(utilizations(params).rho_a, params.service_value_ratio(CustomerClass::B), 1);
}

HighRatioThresholds fs_thresholds_high(const ModelParams& params)
{
    if (fs_regime(params) != Regime::HighRatio)
    {
        throw Error(ErrorKind::WrongRegime, "high-ratio thresholds requested in the low-ratio regime");
    }
    const std::int64_t m = naor_threshold(params.reward_a(), params.cost_a(), params.mu());
    const SeriesTable tab(utilizations(params).rho_a, m + 1);
    const double x = params.service_value_ratio(CustomerClass::B);
    const double g = tab.gamma(m);
    const double s = tab.s(m + 1);
    const double real = (x - g) / s;
    if (real > static_cast<double>(kMaxThreshold))
    {
        throw Error(ErrorKind::ThresholdOverflow, "V exceeds " + std::to_string(kMaxThreshold));
    }
    // The floor can be off by one when the quotient lands next to an
    // integer; settle it against the inequality itself.
    auto v = static_cast<std::int64_t>(std::floor(real));
    while (v > 0 && g + static_cast<double>(v) * s > x)
    {
        --v;
    }
    while (g + static_cast<double>(v + 1) * s <= x)
    {
        ++v;
    }
    return HighRatioThresholds{v, m + v, real};
}

ThresholdSet compute_thresholds(const ModelParams& params)
{
    const Utilizations u = utilizations(params);
    ThresholdSet th;
    const double x_a = params.service_value_ratio(CustomerClass::A);
    const std::int64_t m = naor_threshold(params.reward_a(), params.cost_a(), params.mu());
    th.a_equilibrium = ThresholdBracket{m, x_a, static_cast<double>(m), static_cast<double>(m + 1)};
    th.a_social = naor_social_threshold(params.reward_a(), params.cost_a(), params.mu(), u.rho_a);
    try
    {
        th.b_semi = semi_strategic_threshold(params);
    }
    catch (const Error& e)
    {
        if (e.kind() != ErrorKind::UnstableSemiStrategic)
        {
            throw;
        }
    }
    th.regime = fs_regime(params);
    if (th.regime == Regime::LowRatio)
    {
        th.b_low = fs_threshold_low(params);
        th.b_join = th.b_low.value;
    }
    else
    {
        th.high = fs_thresholds_high(params);
        th.b_join = th.high->t - 1;
    }
    th.b_stay = th.b_join + 1;
    return th;
}

double fs_served_prob(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds)
{
    const HighRatioContext c = high_context(params, thresholds);
    check_observed(n);
    if (n >= c.t)
    {
        throw Error(ErrorKind::DomainError, "observed total at or beyond T");
    }
    return high_outcome(c, n).p;
}

double fs_sojourn(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds)
{
    const HighRatioContext c = high_context(params, thresholds);
    check_observed(n);
    if (n >= c.t)
    {
        throw Error(ErrorKind::DomainError, "observed total at or beyond T");
    }
    return high_outcome(c, n).e;
}

double fs_net_benefit(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds)
{
    check_observed(n);
    const double r = params.reward_b();
    const double cost = params.cost_b();
    if (thresholds.regime == Regime::LowRatio)
    {
        return net_benefit_semi(Position::behind(static_cast<int>(n)), params);
    }
    HighRatioContext c = high_context(params, thresholds);
    if (n > c.t)
    {
        throw Error(ErrorKind::DomainError, "observed total beyond T");
    }
    if (n == c.t)
    {
        // Deviator joins at T and stays through Position T + 1: the same
        // walk shifted up one slot, with one more certain service at the end.
        ++c.v;
        ++c.t;
    }
    const Outcome o = high_outcome(c, n);
    return r * o.p - cost * o.e;
}

double g_value(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds)
{
    const HighRatioContext c = high_context(params, thresholds);
    if (n < c.v || n > c.t - 1)
    {
        throw Error(ErrorKind::DomainError, "G is defined for V <= n <= T - 1");
    }
    const TwoBarrierWalk walk{c.rho, n + 1 - c.v, c.t - n};
    const double p = hit_floor_probability(walk);
    return scaled_exit_time(walk) / (c.mu * p);
}

EquilibriumProfile fs_equilibrium_profile(const ModelParams& params)
{
    return EquilibriumProfile(compute_thresholds(params));
}

}  // namespace stratq
