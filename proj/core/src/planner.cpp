#include "stratq/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratq/errors.hpp"
#include "stratq/series.hpp"

namespace stratq
{

ThresholdBracket a_planner_threshold(const ModelParams& params)
{
    return naor_social_threshold(params.reward_a(), params.cost_a(), params.mu(), utilizations(params).rho_a);
}

GlobalPlan global_thresholds(const ModelParams& params)
{
    const Utilizations u = utilizations(params);
    GlobalPlan plan;
    if (params.lambda_b() == 0.0)
    {
        // No B traffic: the plan is the single-class social optimum for A.
        plan.favored_class = CustomerClass::A;
        plan.favored_threshold = a_planner_threshold(params);
        plan.total_threshold = plan.favored_threshold;
        plan.eviction_rule = "none";
        return plan;
    }
    const double ratio_a = params.reward_a() / params.cost_a();
    const double ratio_b = params.reward_b() / params.cost_b();
    const CustomerClass fav = ratio_a >= ratio_b ? CustomerClass::A : CustomerClass::B;
    const CustomerClass other = fav == CustomerClass::A ? CustomerClass::B : CustomerClass::A;
    const double rho_fav = fav == CustomerClass::A ? u.rho_a : u.rho_b;
    plan.favored_class = fav;
    plan.favored_threshold = naor_social_threshold(params.reward(fav), params.cost(fav), params.mu(), rho_fav);
    plan.total_threshold = naor_social_threshold(params.reward(other), params.cost(other), params.mu(), u.rho);
    plan.eviction_rule = std::string("last ") + std::string(to_string(other)) + " customer reneges on overflow";
    return plan;
}

TrapezoidSpec TrapezoidSpec::from_params(const ModelParams& params, std::int64_t n)
{
    return TrapezoidSpec{a_planner_threshold(params).value, n, params.lambda_a(), params.lambda_b(), params.mu()};
}

int TrapezoidChain::index(std::int64_t i, std::int64_t j) const
{
    if (i < 0 || i > m_star || j < 0 || i + j > n)
    {
        return -1;
    }
    return grid[static_cast<std::size_t>(i * (n + 1) + j)];
}

TrapezoidChain build_trapezoid(const TrapezoidSpec& spec)
{
    if (spec.m_star < 1 || spec.n <= spec.m_star)
    {
        throw Error(ErrorKind::DegenerateTrapezoid,
                    "n = " + std::to_string(spec.n) + " must exceed m_star = " + std::to_string(spec.m_star));
    }
    if (!(spec.mu > 0.0) || spec.lambda_a < 0.0 || spec.lambda_b < 0.0)
    {
        throw Error(ErrorKind::NonPositiveRate, "trapezoid rates out of range");
    }
    const std::int64_t m = spec.m_star;
    const std::int64_t n = spec.n;
    TrapezoidChain t;
    t.m_star = m;
    t.n = n;
    t.grid.assign(static_cast<std::size_t>((m + 1) * (n + 1)), -1);
    auto slot = [&](std::int64_t i, std::int64_t j) -> int& { return t.grid[static_cast<std::size_t>(i * (n + 1) + j)]; };

    t.origin = t.chain.add_state("(0,0)", StateRole::Target);
    slot(0, 0) = t.origin;
    t.renege = t.chain.add_state("renege", StateRole::Absorbing);
    for (std::int64_t j = 1; j <= n; ++j)
    {
        for (std::int64_t i = 0; i <= m && i + j <= n; ++i)
        {
            slot(i, j) = t.chain.add_state("(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    for (std::int64_t j = 1; j <= n; ++j)
    {
        for (std::int64_t i = 0; i <= m && i + j <= n; ++i)
        {
            const int s = slot(i, j);
            if (i < m)
            {
                t.chain.add_rate(s, i + 1 + j <= n ? slot(i + 1, j) : t.renege, spec.lambda_a);
            }
            t.chain.add_rate(s, i + j + 1 <= n ? slot(i, j + 1) : t.renege, spec.lambda_b);
            t.chain.add_rate(s, i > 0 ? slot(i - 1, j) : slot(0, j - 1), spec.mu);
        }
    }
    return t;
}

TrapezoidSolution solve_trapezoid(const TrapezoidSpec& spec)
{
    TrapezoidChain layout = build_trapezoid(spec);
    AbsorptionResult result = solve_absorption(layout.chain);
    return TrapezoidSolution{std::move(layout), std::move(result)};
}

PlannerMetrics b_planner_metrics(const TrapezoidSpec& spec, QueueState state)
{
    if (state.total() != spec.n || state.n_b < 1 || state.n_a < 0 || state.n_a > spec.m_star)
    {
        throw Error(ErrorKind::DomainError, "entry state must satisfy n_a + n_b = n with n_b >= 1 and n_a <= m_star");
    }
    const TrapezoidSolution sol = solve_trapezoid(spec);
    const std::int64_t m = spec.m_star;
    const double rho = (spec.lambda_a + spec.lambda_b) / spec.mu;
    const SeriesTable tab(rho, m + 1);
    const auto top = static_cast<std::size_t>(sol.layout.index(0, spec.n - m));
    const auto entry = static_cast<std::size_t>(sol.layout.index(state.n_a, state.n_b));

    PlannerMetrics out;
    out.p_direct = sol.result.eta[entry];
    out.e_direct = sol.result.kappa[entry];
    if (state.n_a == m)
    {
        // The corner sits in the rectangle, not on the triangle's edge.
        out.p = out.p_direct;
        out.e = out.e_direct;
        return out;
    }
    const double s_cap = tab.s(m + 1);
    out.p = sol.result.eta[top] / s_cap;
    out.e = tab.gamma(m) / (spec.mu * s_cap) + sol.result.kappa[top] / s_cap;
    return out;
}

double trapezoid_eta_residual(const TrapezoidSolution& solved, const TrapezoidSpec& spec)
{
    const TrapezoidChain& t = solved.layout;
    const auto& eta = solved.result.eta;
    const std::int64_t m = spec.m_star;
    const std::int64_t top = spec.n - m;
    const double lam = spec.lambda_a + spec.lambda_b;
    const double denom = lam + spec.mu;
    const double rho = lam / spec.mu;
    const SeriesTable tab(rho, m + 1);
    auto at = [&](std::int64_t i, std::int64_t j) { return eta[static_cast<std::size_t>(t.index(i, j))]; };
    const double eta_top = at(0, top);

    double worst = 0.0;
    for (std::int64_t j = 1; j <= top; ++j)
    {
        for (std::int64_t i = 0; i <= m; ++i)
        {
            const double down = i > 0 ? at(i - 1, j) : at(0, j - 1);
            const double a_move = i < m ? at(i + 1, j) : at(i, j);
            double b_move = 0.0;
            if (j < top)
            {
                b_move = at(i, j + 1);
            }
            else if (i < m)
            {
                b_move = tab.s(m - i) / tab.s(m + 1) * eta_top;
            }
            const double rhs = (spec.mu * down + spec.lambda_a * a_move + spec.lambda_b * b_move) / denom;
            worst = std::max(worst, std::abs(at(i, j) - rhs));
        }
    }
    return worst;
}

BPlannerScan b_planner_scan(const ModelParams& params)
{
    BPlannerScan scan;
    if (params.reward_b() / params.cost_b() < params.reward_a() / params.cost_a())
    {
        scan.threshold = global_thresholds(params).total_threshold.value;
        scan.coincides_with_global = true;
        return scan;
    }
    const std::int64_t m = a_planner_threshold(params).value;
    const double rho = utilizations(params).rho;
    const double r = params.reward_b();
    const double c = params.cost_b();
    int negative_run = 0;
    bool seen_negative = false;
    for (std::int64_t n = 1;; ++n)
    {
        if (n > m + kPlannerScanLimit)
        {
            throw Error(ErrorKind::ScanDiverged, "no sign change within " + std::to_string(kPlannerScanLimit) + " candidates");
        }
        double value;
        if (n <= m)
        {
            const Position pos(static_cast<int>(n));
            value = r * served_prob_position(pos, rho) - c * sojourn_position(pos, rho, params.mu());
        }
        else
        {
            const PlannerMetrics pm = b_planner_metrics(TrapezoidSpec::from_params(params, n), QueueState{0, static_cast<int>(n)});
            value = r * pm.p - c * pm.e;
        }
        scan.values.push_back(value);
        if (value >= 0.0)
        {
            if (seen_negative)
            {
                scan.single_crossing = false;
            }
            scan.threshold = n;
            negative_run = 0;
        }
        else
        {
            seen_negative = true;
            if (++negative_run == 3)
            {
                break;
            }
        }
    }
    return scan;
}

std::int64_t b_planner_threshold(const ModelParams& params)
{
    return b_planner_scan(params).threshold;
}

}  // namespace stratq
