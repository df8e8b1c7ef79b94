#include "stratq/series.hpp"

#include <cmath>
#include <string>

#include "stratq/errors.hpp"
#include "stratq/model.hpp"

namespace stratq
{

SeriesTable::SeriesTable(double rho, std::int64_t kmax) : rho_(rho)
{
    s_.reserve(static_cast<std::size_t>(kmax) + 1);
    gamma_.reserve(static_cast<std::size_t>(kmax) + 1);
    SeriesAccumulator acc(rho);
    s_.push_back(0.0);
    gamma_.push_back(0.0);
    for (std::int64_t k = 1; k <= kmax; ++k)
    {
        acc.advance();
        s_.push_back(acc.partial_sum());
        gamma_.push_back(acc.gamma());
    }
}

double geometric_sum(double rho, std::int64_t k) noexcept
{
    SeriesAccumulator acc(rho);
    acc.advance_to(k);
    return acc.partial_sum();
}

double gamma_sum(double rho, std::int64_t k) noexcept
{
    SeriesAccumulator acc(rho);
    acc.advance_to(k);
    return acc.gamma();
}

double hit_floor_probability(const TwoBarrierWalk& walk) noexcept
{
    const double span = geometric_sum(walk.rho, walk.to_low + walk.to_high);
    return geometric_sum(walk.rho, walk.to_high) / span;
}

double scaled_exit_time(const TwoBarrierWalk& walk) noexcept
{
    const std::int64_t span = walk.to_low + walk.to_high;
    SeriesAccumulator acc(walk.rho);
    double s_low = 0.0, g_low = 0.0, s_high = 0.0;
    for (std::int64_t k = 1; k <= span; ++k)
    {
        acc.advance();
        if (k == walk.to_low)
        {
            s_low = acc.partial_sum();
            g_low = acc.gamma();
        }
        if (k == walk.to_high)
        {
            s_high = acc.partial_sum();
        }
    }
    if (span == 0)
    {
        return 0.0;
    }
    const double p_ceiling = 1.0 - s_high / acc.partial_sum();
    return g_low + walk.rho * s_low * s_high - p_ceiling * acc.gamma();
}

Bracket bracket_gamma(double rho, double target, std::int64_t shift)
{
    SeriesAccumulator acc(rho);
    acc.advance_to(shift);
    double current = acc.gamma();
    std::int64_t k = 0;
    while (true)
    {
        acc.advance();
        const double next = acc.gamma();
        if (next > target)
        {
            return Bracket{k, current, next};
        }
        current = next;
        if (++k > kMaxThreshold)
        {
            throw Error(ErrorKind::ThresholdOverflow,
                        "threshold exceeds " + std::to_string(kMaxThreshold) + " for rho=" + std::to_string(rho));
        }
    }
}

namespace
{

double gamma_continuous(double rho, double x)
{
    if (std::abs(rho - 1.0) < kUnitLoadTolerance)
    {
        return x * (x + 1.0) / 2.0;
    }
    if (rho == 0.0)
    {
        return x;
    }
    const double d = 1.0 - rho;
    // 1 - rho^x, accurate for rho near 1
    const double one_minus_pow = -std::expm1(x * std::log(rho));
    return (x * d - rho * one_minus_pow) / (d * d);
}

}  // namespace

double gamma_real_root(double rho, double target)
{
    const Bracket b = bracket_gamma(rho, target);
    double lo = static_cast<double>(b.index);
    double hi = lo + 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (gamma_continuous(rho, mid) <= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace stratq
