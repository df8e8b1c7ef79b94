#pragma once

#include <cstdint>
#include <optional>

#include "stratq/model.hpp"

namespace stratq
{

// A floored threshold together with the real root it was floored from and
// the pair g(value) <= target < g(value + 1) that pins it.
struct ThresholdBracket
{
    std::int64_t value = 0;
    double real_root = 0.0;
    double at = 0.0;
    double next = 0.0;
};

// floor(R mu / C).
std::int64_t naor_threshold(double reward, double cost, double mu);

// Largest n with gamma_rho(n) <= R mu / C.
ThresholdBracket naor_social_threshold(double reward, double cost, double mu, double rho);

// Tagged B at Position p, reneging on reaching p + 1, A arrivals at rho_a.
double served_prob_position(Position p, double rho_a);
double sojourn_position(Position p, double rho_a, double mu);
double net_benefit_semi(Position p, const ModelParams& params);

// Stay threshold on Position for B when A customers never balk.
// Throws UnstableSemiStrategic when rho_a >= 1.
ThresholdBracket semi_strategic_threshold(const ModelParams& params);

// Expected time for the walk on [0, cap] x N to reach the origin from
// (n_a, n_b): A arrivals raise n_a up to the cap, services clear A first.
// Throws CapViolation if n_a > cap.
double rect_expected_clear_time(int n_a, int n_b, int cap, double rho_a, double mu);

enum class Regime
{
    LowRatio,
    HighRatio,
};

const char* to_string(Regime r) noexcept;

Regime fs_regime(const ModelParams& params);

// Largest observed total n with gamma(n + 1) <= R_B mu / C_B.
ThresholdBracket fs_threshold_low(const ModelParams& params);

struct HighRatioThresholds
{
    std::int64_t v = 0;
    std::int64_t t = 0;
    double real_root = 0.0;  // (R_B mu / C_B - gamma(M)) / S_(M+1)
};

HighRatioThresholds fs_thresholds_high(const ModelParams& params);

struct ThresholdSet
{
    ThresholdBracket a_equilibrium;  // value = Naor threshold, real_root = R mu / C
    ThresholdBracket a_social;
    std::optional<ThresholdBracket> b_semi;  // empty when rho_a >= 1
    Regime regime = Regime::LowRatio;
    ThresholdBracket b_low;  // LowRatio only; zeroed otherwise
    std::optional<HighRatioThresholds> high;
    std::int64_t b_join = 0;  // B joins iff observed total <= b_join
    std::int64_t b_stay = 0;  // B stays iff Position <= b_stay
};

ThresholdSet compute_thresholds(const ModelParams& params);

// Observed total n at which a B customer arrives; the composition ahead is
// taken to hold at least V B customers (the worst case the thresholds are
// built on). Served probability is 1 below V.
double fs_served_prob(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds);

// Expected sojourn of the joining B customer under the same reading.
double fs_sojourn(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds);

// R_B P - C_B E for a B customer joining at observed total n. In LowRatio
// this is the position payoff at n + 1. At n = T (HighRatio) the deviator
// joins and stays one position longer than the profile allows.
double fs_net_benefit(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds);

// Exit time divided by served probability, V <= n <= T - 1.
double g_value(std::int64_t n, const ModelParams& params, const ThresholdSet& thresholds);

class EquilibriumProfile
{
public:
    explicit EquilibriumProfile(ThresholdSet thresholds) : thresholds_(thresholds) {}

    bool a_join(std::int64_t observed_a) const noexcept { return observed_a < thresholds_.a_equilibrium.value; }
    bool b_join(std::int64_t observed_total) const noexcept { return observed_total <= thresholds_.b_join; }
    bool b_stay(Position p) const noexcept { return p.value() <= thresholds_.b_stay; }

    const ThresholdSet& thresholds() const noexcept { return thresholds_; }

private:
    ThresholdSet thresholds_;
};

EquilibriumProfile fs_equilibrium_profile(const ModelParams& params);

}  // namespace stratq
