#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace stratq
{

// Running geometric partial sums for a load factor rho:
//
//   S_k     = 1 + rho + ... + rho^(k-1)      (S_0 = 0)
//   gamma_k = S_1 + S_2 + ... + S_k          (gamma_0 = 0)
//
// All the rho != 1 / rho == 1 closed-form pairs go through these two
// recurrences; there is no separate unit-load branch.
class SeriesAccumulator
{
public:
    explicit SeriesAccumulator(double rho) noexcept : rho_(rho) {}

    // k -> k + 1
    void advance() noexcept
    {
        partial_ = 1.0 + rho_ * partial_;
        gamma_ += partial_;
        ++k_;
    }

    void advance_to(std::int64_t k) noexcept
    {
        while (k_ < k)
        {
            advance();
        }
    }

    double rho() const noexcept { return rho_; }
    std::int64_t index() const noexcept { return k_; }
    double partial_sum() const noexcept { return partial_; }
    double gamma() const noexcept { return gamma_; }

private:
    double rho_;
    std::int64_t k_ = 0;
    double partial_ = 0.0;
    double gamma_ = 0.0;
};

// S_k and gamma_k for k = 0..kmax, precomputed.
class SeriesTable
{
public:
    SeriesTable(double rho, std::int64_t kmax);

    double rho() const noexcept { return rho_; }
    double s(std::int64_t k) const { return s_.at(static_cast<std::size_t>(k)); }
    double gamma(std::int64_t k) const { return gamma_.at(static_cast<std::size_t>(k)); }

private:
    double rho_;
    std::vector<double> s_;
    std::vector<double> gamma_;
};

// S_k(rho). O(k).
double geometric_sum(double rho, std::int64_t k) noexcept;

// gamma(k) = sum_{j=1..k} S_j(rho). O(k).
double gamma_sum(double rho, std::int64_t k) noexcept;

// A nearest-neighbour walk that steps up at rate lambda and down at rate mu
// (rho = lambda / mu), started `to_low` steps above an absorbing floor and
// `to_high` steps below an absorbing ceiling.
struct TwoBarrierWalk
{
    double rho;
    std::int64_t to_low;
    std::int64_t to_high;
};

// Probability the floor is reached first: S_high / S_(low + high).
double hit_floor_probability(const TwoBarrierWalk& walk) noexcept;

// mu times the expected time until either barrier is reached:
//   gamma(L) + rho S_L S_W - (1 - S_W / S_K) gamma(K),  K = L + W.
double scaled_exit_time(const TwoBarrierWalk& walk) noexcept;

// Integer bracketing on a strictly increasing sequence.
struct Bracket
{
    std::int64_t index = 0;  // largest k with value(k) <= target
    double at = 0.0;         // value(index)
    double next = 0.0;       // value(index + 1), strictly above target
};

inline constexpr std::int64_t kMaxThreshold = 1'000'000;

// Largest k >= 0 with gamma(k + shift) <= target, scanning the recurrence.
// Throws ThresholdOverflow beyond kMaxThreshold.
Bracket bracket_gamma(double rho, double target, std::int64_t shift = 0);

// Real x >= 0 with gamma(x) = target, using the continuous extension
// (x(1 - rho) - rho(1 - rho^x)) / (1 - rho)^2, or x(x + 1)/2 at rho = 1.
double gamma_real_root(double rho, double target);

}  // namespace stratq
