#include "stratq/ruin.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>

#include "stratq/errors.hpp"

namespace stratq
{

namespace
{

constexpr double kFairCoinTolerance = 1e-12;

bool is_fair(double p) { return std::abs(p - 0.5) < kFairCoinTolerance; }

}  // namespace

void check_ruin_spec(const RuinSpec& spec)
{
    if (!(spec.p > 0.0 && spec.p < 1.0))
    {
        throw Error(ErrorKind::DomainError, "win probability must lie in (0, 1)");
    }
    if (spec.loss < 1 || spec.win < 1)
    {
        throw Error(ErrorKind::DomainError, "barriers must be positive");
    }
}

double ruin_probability(const RuinSpec& spec)
{
    check_ruin_spec(spec);
    const double L = spec.loss;
    const double W = spec.win;
    if (is_fair(spec.p))
    {
        return W / (L + W);
    }
    // 1 - (r^L - 1)/(r^K - 1) with r = q/p, rearranged so that only one of
    // r, 1/r is ever raised to a power and the differences go through expm1.
    const double log_r = std::log(spec.q()) - std::log(spec.p);
    if (log_r > 0.0)
    {
        // (1 - r^-W) / (1 - r^-K)
        return std::expm1(-W * log_r) / std::expm1(-(L + W) * log_r);
    }
    // r^L (r^W - 1) / (r^K - 1)
    return std::exp(L * log_r) * std::expm1(W * log_r) / std::expm1((L + W) * log_r);
}

double ruin_expected_duration(const RuinSpec& spec)
{
    check_ruin_spec(spec);
    const double L = spec.loss;
    const double W = spec.win;
    if (is_fair(spec.p))
    {
        return L * W;
    }
    // K/(q-p) (L/K - (r^L-1)/(r^K-1)) = (K Pruin - W)/(q - p)
    return ((L + W) * ruin_probability(spec) - W) / (spec.q() - spec.p);
}

double one_sided_expected_duration(double p, int barrier, BarrierSide side)
{
    if (!(p > 0.0 && p < 1.0) || barrier < 1)
    {
        throw Error(ErrorKind::DomainError, "need 0 < p < 1 and a positive barrier");
    }
    const double q = 1.0 - p;
    if (side == BarrierSide::Win)
    {
        if (!(p > q) || is_fair(p))
        {
            throw Error(ErrorKind::DriftTowardOpenBarrier, "win barrier needs p > 1/2");
        }
        return barrier / (p - q);
    }
    if (!(q > p) || is_fair(p))
    {
        throw Error(ErrorKind::DriftTowardOpenBarrier, "loss barrier needs p < 1/2");
    }
    return barrier / (q - p);
}

int AbsorbingChainSpec::add_state(std::string label, StateRole role)
{
    labels_.push_back(std::move(label));
    roles_.push_back(role);
    edges_.emplace_back();
    return static_cast<int>(roles_.size() - 1);
}

void AbsorbingChainSpec::add_rate(int from, int to, double rate)
{
    const auto n = static_cast<int>(size());
    if (from < 0 || from >= n || to < 0 || to >= n)
    {
        throw Error(ErrorKind::DomainError, "transition refers to an unknown state");
    }
    if (!std::isfinite(rate) || rate < 0.0)
    {
        throw Error(ErrorKind::DomainError, "rates must be finite and nonnegative");
    }
    if (roles_[static_cast<std::size_t>(from)] != StateRole::Transient && rate > 0.0)
    {
        throw Error(ErrorKind::DomainError, "absorbing state " + labels_[static_cast<std::size_t>(from)] + " has an exit");
    }
    if (from == to || rate == 0.0)
    {
        return;
    }
    edges_[static_cast<std::size_t>(from)].push_back({to, rate});
}

double AbsorbingChainSpec::exit_rate(int s) const
{
    double total = 0.0;
    for (const Edge& e : edges(s))
    {
        total += e.rate;
    }
    return total;
}

namespace
{

void check_reachability(const AbsorbingChainSpec& chain)
{
    const std::size_t n = chain.size();
    std::vector<std::vector<int>> incoming(n);
    for (std::size_t s = 0; s < n; ++s)
    {
        for (const auto& e : chain.edges(static_cast<int>(s)))
        {
            incoming[static_cast<std::size_t>(e.to)].push_back(static_cast<int>(s));
        }
    }
    std::vector<char> seen(n, 0);
    std::deque<int> frontier;
    for (std::size_t s = 0; s < n; ++s)
    {
        if (chain.role(static_cast<int>(s)) != StateRole::Transient)
        {
            seen[s] = 1;
            frontier.push_back(static_cast<int>(s));
        }
    }
    while (!frontier.empty())
    {
        const int s = frontier.front();
        frontier.pop_front();
        for (int from : incoming[static_cast<std::size_t>(s)])
        {
            if (!seen[static_cast<std::size_t>(from)])
            {
                seen[static_cast<std::size_t>(from)] = 1;
                frontier.push_back(from);
            }
        }
    }
    for (std::size_t s = 0; s < n; ++s)
    {
        if (!seen[s])
        {
            throw Error(ErrorKind::NotAbsorbing, "state " + chain.label(static_cast<int>(s)) + " cannot reach an absorbing state");
        }
    }
}

}  // namespace

AbsorptionResult solve_absorption(const AbsorbingChainSpec& chain)
{
    const std::size_t n = chain.size();
    if (n > kMaxChainStates)
    {
        throw Error(ErrorKind::ChainTooLarge, std::to_string(n) + " states exceeds the dense-solve limit");
    }
    check_reachability(chain);

    // Jump-chain rows over the surviving states plus expected time per
    // visit. Ordered maps keep the floating-point summation order fixed.
    std::vector<std::map<int, double>> row(n);
    std::vector<std::set<int>> into(n);
    std::vector<double> hold(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
    {
        const int si = static_cast<int>(s);
        if (chain.role(si) != StateRole::Transient)
        {
            continue;
        }
        const double total = chain.exit_rate(si);
        hold[s] = 1.0 / total;
        for (const auto& e : chain.edges(si))
        {
            row[s][e.to] += e.rate / total;
            into[static_cast<std::size_t>(e.to)].insert(si);
        }
    }

    std::vector<int> order;
    for (std::size_t k = 0; k < n; ++k)
    {
        const int ki = static_cast<int>(k);
        if (chain.role(ki) != StateRole::Transient)
        {
            continue;
        }
        order.push_back(ki);
        auto& rk = row[k];
        for (int i : into[k])
        {
            auto& ri = row[static_cast<std::size_t>(i)];
            const auto it = ri.find(ki);
            if (it == ri.end())
            {
                continue;
            }
            const double w = it->second;
            ri.erase(it);
            hold[static_cast<std::size_t>(i)] += w * hold[k];
            for (const auto& [j, pkj] : rk)
            {
                ri[j] += w * pkj;
                if (j != i)
                {
                    into[static_cast<std::size_t>(j)].insert(i);
                }
            }
            // Fold a new self-loop back in; the complement is the sum of the
            // remaining row, never 1 - p_ii.
            const auto self = ri.find(i);
            if (self != ri.end())
            {
                ri.erase(self);
                double leave = 0.0;
                for (const auto& [j, pij] : ri)
                {
                    leave += pij;
                }
                if (!(leave > 0.0) || !std::isfinite(leave))
                {
                    throw Error(ErrorKind::SingularSystem, "state " + chain.label(i) + " lost every exit");
                }
                for (auto& entry : ri)
                {
                    entry.second /= leave;
                }
                hold[static_cast<std::size_t>(i)] /= leave;
            }
        }
        for (const auto& [j, pkj] : rk)
        {
            into[static_cast<std::size_t>(j)].erase(ki);
        }
    }

    AbsorptionResult out;
    out.eta.assign(n, 0.0);
    out.kappa.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
    {
        if (chain.role(static_cast<int>(s)) == StateRole::Target)
        {
            out.eta[s] = 1.0;
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it)
    {
        const auto k = static_cast<std::size_t>(*it);
        double eta = 0.0;
        double kappa = hold[k];
        for (const auto& [j, pkj] : row[k])
        {
            eta += pkj * out.eta[static_cast<std::size_t>(j)];
            kappa += pkj * out.kappa[static_cast<std::size_t>(j)];
        }
        if (!std::isfinite(eta) || !std::isfinite(kappa))
        {
            throw Error(ErrorKind::SingularSystem, "non-finite value at state " + chain.label(*it));
        }
        out.eta[k] = eta;
        out.kappa[k] = kappa;
    }
    return out;
}

}  // namespace stratq
