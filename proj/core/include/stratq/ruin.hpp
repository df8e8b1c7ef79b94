#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace stratq
{

// Gambler with per-round win probability p starts at 0 and plays until the
// fortune hits -loss or +win.
struct RuinSpec
{
    double p = 0.5;
    int loss = 1;
    int win = 1;

    double q() const noexcept { return 1.0 - p; }
};

// Throws DomainError unless 0 < p < 1 and both barriers are >= 1.
void check_ruin_spec(const RuinSpec& spec);

// Probability that -loss is reached first.
double ruin_probability(const RuinSpec& spec);

// Expected number of rounds until either barrier.
double ruin_expected_duration(const RuinSpec& spec);

enum class BarrierSide
{
    Win,
    Loss,
};

// Expected rounds to reach the only barrier; the other is at infinity.
double one_sided_expected_duration(double p, int barrier, BarrierSide side);

enum class StateRole
{
    Transient,
    Target,     // the set J
    Absorbing,  // absorbing, not in J
};

// Finite continuous-time jump chain with absorbing states. States are
// indexed in insertion order; labels are for diagnostics only.
class AbsorbingChainSpec
{
public:
    struct Edge
    {
        int to;
        double rate;
    };

    int add_state(std::string label, StateRole role = StateRole::Transient);

    // Rates out of absorbing states are rejected. Self-loops are accepted
    // and dropped: they do not change where or when the chain leaves.
    void add_rate(int from, int to, double rate);

    std::size_t size() const noexcept { return roles_.size(); }
    StateRole role(int s) const { return roles_.at(static_cast<std::size_t>(s)); }
    const std::string& label(int s) const { return labels_.at(static_cast<std::size_t>(s)); }
    const std::vector<Edge>& edges(int s) const { return edges_.at(static_cast<std::size_t>(s)); }

    // Total rate out of s, self-loops excluded.
    double exit_rate(int s) const;

private:
    std::vector<std::string> labels_;
    std::vector<StateRole> roles_;
    std::vector<std::vector<Edge>> edges_;
};

struct AbsorptionResult
{
    std::vector<double> eta;    // P(hit J before any other absorbing state)
    std::vector<double> kappa;  // expected time to absorption, model time units
};

inline constexpr std::size_t kMaxChainStates = 20'000;

// Throws NotAbsorbing if a transient state cannot reach an absorbing one,
// ChainTooLarge above kMaxChainStates, SingularSystem on numerical breakdown.
//
// Solved by state reduction (Grassmann-Taksar-Heyman style): transient
// states are eliminated in index order and the jump probabilities of the
// survivors updated with sums of nonnegative terms only, then eta and kappa
// are recovered by back-substitution. No subtraction occurs, so tiny hitting
// probabilities keep full relative accuracy.
AbsorptionResult solve_absorption(const AbsorbingChainSpec& chain);

}  // namespace stratq
