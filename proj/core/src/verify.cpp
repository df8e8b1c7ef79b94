#include "stratq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "stratq/errors.hpp"
#include "stratq/oracles.hpp"
#include "stratq/planner.hpp"
#include "stratq/ruin.hpp"
#include "stratq/series.hpp"
#include "stratq/simulate.hpp"
#include "stratq/strategic.hpp"

namespace stratq
{

namespace
{

constexpr std::array<double, kCriterionCount> kTimeLimit = {5, 10, 30, 1, 5, 5, 180, 300, 120, 300};

double rel_err(double value, double ref)
{
    if (value == ref)
    {
        return 0.0;
    }
    const double scale = std::max(std::abs(ref), std::numeric_limits<double>::min());
    return std::abs(value - ref) / scale;
}

// |x - ref| in standard errors; an exact estimate must match exactly.
double z_score(double x, double ref, double se)
{
    const double gap = std::abs(x - ref);
    if (se > 0.0)
    {
        return gap / se;
    }
    return gap <= 1e-12 * std::max(1.0, std::abs(ref)) ? 0.0 : std::numeric_limits<double>::infinity();
}

class Tamper
{
public:
    explicit Tamper(const VerifyOptions& o) : faults_(o.faults) {}

    double operator()(const char* name, double value, double factor = 1.0 + 1e-6) const
    {
        return faults_.count(name) != 0 ? value * factor : value;
    }
    std::int64_t shift(const char* name, std::int64_t value) const { return faults_.count(name) != 0 ? value + 1 : value; }

private:
    const std::set<std::string>& faults_;
};

// Tracks the worst deviation and where it happened.
struct Worst
{
    double value = 0.0;
    std::string where;

    void update(double v, const std::string& at)
    {
        if (!(v <= value))  // NaN counts as worst
        {
            value = v;
            where = at;
        }
    }
};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

CheckResult finish(int criterion, std::string name, double tolerance, const Worst& worst, bool inclusive,
                   std::chrono::steady_clock::time_point start, std::string detail = {})
{
    CheckResult r;
    r.criterion = criterion;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.observed = worst.value;
    r.within_tolerance = inclusive ? worst.value <= tolerance : worst.value < tolerance;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.time_limit = kTimeLimit[static_cast<std::size_t>(criterion - 1)];
    r.detail = worst.where.empty() ? detail : (detail.empty() ? "worst at " + worst.where : detail + "; worst at " + worst.where);
    return r;
}

using Clock = std::chrono::steady_clock;

SimConfig mc_config(const VerifyOptions& o, int full_reps, int small_reps, std::uint64_t salt)
{
    SimConfig c;
    c.seed = o.seed ^ (salt * 0x9E3779B97F4A7C15ULL);
    c.replications = o.grid == Grid::Full ? full_reps : small_reps;
    c.threads = o.threads;
    return c;
}

std::vector<CheckResult> ruin_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    const int top = o.grid == Grid::Full ? 30 : 12;
    Worst worst;
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9})
    {
        for (int loss = 1; loss <= top; ++loss)
        {
            for (int win = 1; win <= top; ++win)
            {
                const auto dp = oracle::dp_ruin(p, loss, win);
                const RuinSpec spec{p, loss, win};
                const std::string at = "p=" + fmt(p) + " L=" + std::to_string(loss) + " W=" + std::to_string(win);
                worst.update(rel_err(tamper("ruin_probability", ruin_probability(spec)), static_cast<double>(dp.probability)),
                             at + " (probability)");
                worst.update(rel_err(ruin_expected_duration(spec), static_cast<double>(dp.duration)), at + " (duration)");
            }
        }
    }
    return {finish(1, "gamblers_ruin_vs_dp", 1e-12, worst, true, start)};
}

std::vector<CheckResult> single_class_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    const double mu = 1.3;
    const int top = o.grid == Grid::Full ? 50 : 20;
    Worst lib, printed;
    for (double rho : {0.0, 0.3, 0.7, 1.0, 1.5})
    {
        for (int p = 1; p <= top; ++p)
        {
            const auto res = solve_absorption(oracle::position_walk(rho * mu, mu, p));
            const double eta = res.eta[static_cast<std::size_t>(p)];
            const double kappa = res.kappa[static_cast<std::size_t>(p)];
            const double gamma_chain = mu * kappa / eta;
            const std::string at = "rho=" + fmt(rho) + " p=" + std::to_string(p);
            const Position pos(p);
            lib.update(rel_err(served_prob_position(pos, rho), eta), at + " P");
            lib.update(rel_err(tamper("sojourn_position", sojourn_position(pos, rho, mu)), kappa), at + " E");
            lib.update(rel_err(gamma_sum(rho, p), gamma_chain), at + " gamma");
            printed.update(rel_err(oracle::printed::served_prob(rho, p), eta), at + " P");
            printed.update(rel_err(oracle::printed::sojourn(rho, mu, p), kappa), at + " E");
            printed.update(rel_err(oracle::printed::gamma(rho, p), gamma_chain), at + " gamma");
        }
    }
    return {finish(2, "single_class_series_vs_chain", 1e-10, lib, true, start),
            finish(2, "single_class_closed_form_vs_chain", 1e-10, printed, true, start)};
}

std::vector<CheckResult> rectangle_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    const double mu = 0.8;
    const int top = o.grid == Grid::Full ? 20 : 8;
    Worst lib, printed;
    for (double rho : {0.5, 1.0, 1.5})
    {
        for (int cap = 0; cap <= top; ++cap)
        {
            const auto res = solve_absorption(oracle::rectangle_walk(rho * mu, mu, cap, top));
            for (int n_a = 0; n_a <= cap; ++n_a)
            {
                for (int n_b = 0; n_b <= top; ++n_b)
                {
                    if (n_a == 0 && n_b == 0)
                    {
                        continue;
                    }
                    const double ref = res.kappa[static_cast<std::size_t>(oracle::rectangle_index(cap, top, n_a, n_b))];
                    const std::string at = "rho=" + fmt(rho) + " L=" + std::to_string(cap) + " (" + std::to_string(n_a) +
                                           "," + std::to_string(n_b) + ")";
                    lib.update(rel_err(tamper("rect_expected_clear_time", rect_expected_clear_time(n_a, n_b, cap, rho, mu)), ref), at);
                    printed.update(rel_err(oracle::printed::rect_time(rho, mu, cap, n_a, n_b), ref), at);
                    if (n_b == 0)
                    {
                        printed.update(rel_err(oracle::printed::clear_time_a(rho, mu, cap, n_a), ref), at + " U");
                    }
                }
            }
        }
    }
    return {finish(3, "rectangle_series_vs_chain", 1e-9, lib, true, start),
            finish(3, "rectangle_closed_form_vs_chain", 1e-9, printed, true, start)};
}

std::vector<CheckResult> continuity_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    namespace unit = oracle::printed::unit;
    const double mu = 1.0;
    Worst worst;
    for (double eps : {-1e-7, 1e-7})
    {
        const double rho = 1.0 + eps;
        const std::string tag = eps < 0 ? "rho=1-1e-7 " : "rho=1+1e-7 ";
        for (int n = 1; n <= 20; ++n)
        {
            const Position pos(n);
            worst.update(rel_err(tamper("unit_branch", gamma_sum(rho, n), 1.0 + 1e-4), unit::gamma(n)), tag + "gamma n=" + std::to_string(n));
            worst.update(rel_err(served_prob_position(pos, rho), unit::served_prob(n)), tag + "P n=" + std::to_string(n));
            worst.update(rel_err(tamper("sojourn_position", sojourn_position(pos, rho, mu)), unit::sojourn(mu, n)),
                         tag + "E n=" + std::to_string(n));
            worst.update(rel_err(gamma_real_root(rho, unit::gamma(n) + 0.5), gamma_real_root(1.0, unit::gamma(n) + 0.5)),
                         tag + "gamma root n=" + std::to_string(n));
        }
        for (int cap = 0; cap <= 10; ++cap)
        {
            for (int n_a = 0; n_a <= cap; ++n_a)
            {
                for (int n_b = 0; n_b <= 5; ++n_b)
                {
                    if (n_a + n_b == 0)
                    {
                        continue;
                    }
                    worst.update(rel_err(tamper("rect_expected_clear_time", rect_expected_clear_time(n_a, n_b, cap, rho, mu)),
                                         unit::rect_time(mu, cap, n_a, n_b)),
                                 tag + "H");
                }
            }
        }
        // Fully-strategic displays at M = 3, x = 20.
        const ModelParams params = validate_params(RawParams{rho * mu, 0.4, mu, 3.0, 1.0, 20.0, 1.0});
        const ThresholdSet th = compute_thresholds(params);
        const int m = 3;
        const int v = static_cast<int>(th.high->v);
        const int t = static_cast<int>(th.high->t);
        worst.update(rel_err(th.high->real_root, unit::v_real(20.0, m)), tag + "V root");
        for (int n = v; n < t; ++n)
        {
            const double p1 = unit::fs_served(m, t, n);
            const double exit1 = unit::fs_exit(mu, v, t, n);
            worst.update(rel_err(fs_served_prob(n, params, th), p1), tag + "fs P n=" + std::to_string(n));
            worst.update(rel_err(fs_sojourn(n, params, th), exit1 + p1 * unit::fs_tail(mu, m, v)), tag + "fs E n=" + std::to_string(n));
            worst.update(rel_err(tamper("g_value", g_value(n, params, th)), exit1 / p1), tag + "G n=" + std::to_string(n));
        }
        for (int loss = 1; loss <= 10; ++loss)
        {
            for (int win = 1; win <= 10; ++win)
            {
                const RuinSpec spec{0.5 + eps, loss, win};
                worst.update(rel_err(tamper("ruin_probability", ruin_probability(spec)), static_cast<double>(win) / (loss + win)),
                             tag + "ruin P");
                worst.update(rel_err(ruin_expected_duration(spec), static_cast<double>(loss) * win), tag + "ruin T");
            }
        }
        // Trapezoid triangle prefactors under the combined load.
        for (int m2 = 1; m2 <= 6; ++m2)
        {
            worst.update(rel_err(gamma_sum(rho, m2) / (mu * geometric_sum(rho, m2 + 1)), m2 / (2.0 * mu)), tag + "planner prefactor");
        }
    }
    return {finish(4, "branch_continuity", 1e-5, worst, true, start)};
}

double chain_payoff(const ModelParams& params, std::int64_t cap, std::int64_t stay, std::int64_t ahead)
{
    const auto chain = oracle::capped_walk(params.lambda_a(), params.mu(), static_cast<int>(cap), static_cast<int>(stay));
    const auto res = solve_absorption(chain);
    const auto s = static_cast<std::size_t>(oracle::capped_walk_index(static_cast<int>(cap), static_cast<int>(stay), 0, static_cast<int>(ahead)));
    return params.reward_b() * res.eta[s] - params.cost_b() * res.kappa[s];
}

std::vector<CheckResult> sign_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    Worst failures;
    int count = 0;
    int semi_checked = 0;
    int low_points = 0;
    for (const RawParams& raw : strategic_grid())
    {
        const ModelParams params = validate_params(raw);
        const ThresholdSet th = compute_thresholds(params);
        const std::string at = "lambda_a=" + fmt(raw.lambda_a) + " x_a=" + fmt(raw.reward_a) + " x_b=" + fmt(raw.reward_b / raw.cost_b);
        if (th.b_semi)
        {
            ++semi_checked;
            const auto mb = static_cast<int>(th.b_semi->value);
            if (!(net_benefit_semi(Position(mb), params) >= 0.0 && net_benefit_semi(Position(mb + 1), params) < 0.0))
            {
                failures.update(++count, at + " semi");
            }
        }
        const std::int64_t bj = tamper.shift("b_join", th.b_join);
        if (!(fs_net_benefit(bj, params, th) >= 0.0 && fs_net_benefit(bj + 1, params, th) < 0.0))
        {
            failures.update(++count, at + " fully-strategic");
        }
        // Same signs from the explicit capped walk.
        const std::int64_t m = th.a_equilibrium.value;
        if (!(chain_payoff(params, m, bj + 1, bj) >= -1e-12 && chain_payoff(params, m, bj + 2, bj + 1) < 0.0))
        {
            failures.update(++count, at + " capped-walk oracle");
        }
        if (th.regime == Regime::LowRatio)
        {
            ++low_points;
            const Bracket pos = bracket_gamma(utilizations(params).rho_a, params.service_value_ratio(CustomerClass::B));
            if (pos.index != bj + 1)
            {
                failures.update(++count, at + " shift law");
            }
        }
    }
    return {finish(5, "equilibrium_sign_changes", 0.0, failures, true, start,
                   std::to_string(strategic_grid().size()) + " points, " + std::to_string(semi_checked) + " with a stable semi-strategic threshold, " +
                       std::to_string(low_points) + " low-ratio")};
}

std::vector<CheckResult> g_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    Worst monotone, identity;
    int points = 0;
    for (const RawParams& raw : strategic_grid())
    {
        const ModelParams params = validate_params(raw);
        const ThresholdSet th = compute_thresholds(params);
        if (th.regime != Regime::HighRatio)
        {
            continue;
        }
        ++points;
        const double rho = utilizations(params).rho_a;
        const double mu = params.mu();
        const auto m = static_cast<int>(th.a_equilibrium.value);
        const auto v = static_cast<int>(th.high->v);
        const auto t = static_cast<int>(th.high->t);
        const std::string at = "lambda_a=" + fmt(raw.lambda_a) + " x_a=" + fmt(raw.reward_a);
        const auto res = solve_absorption(oracle::capped_walk(params.lambda_a(), mu, m, t));
        const double tail = v > 0 ? res.kappa[static_cast<std::size_t>(oracle::capped_walk_index(m, t, 0, v - 1))] : 0.0;
        for (int n = v; n <= t - 1; ++n)
        {
            const double gn = tamper("g_value", g_value(n, params, th));
            if (n <= t - 2 && !(g_value(n + 1, params, th) > gn))
            {
                monotone.update(monotone.value + 1.0, at + " n=" + std::to_string(n));
            }
            const auto s = static_cast<std::size_t>(oracle::capped_walk_index(m, t, 0, n));
            const double g_chain = (res.kappa[s] - res.eta[s] * tail) / res.eta[s];
            identity.update(rel_err(gn, g_chain), at + " chain n=" + std::to_string(n));
            if (std::abs(rho - 1.0) > kUnitLoadTolerance)
            {
                identity.update(rel_err(gn, oracle::printed::g(rho, mu, m, v, t, n)), at + " closed form n=" + std::to_string(n));
            }
        }
        const double g_last = tamper("g_value", g_value(t - 1, params, th));
        if (std::abs(rho - 1.0) > kUnitLoadTolerance)
        {
            const double term = oracle::printed::g_identity_term(rho, mu, m);
            identity.update(std::abs(g_last + term) / std::max(1.0, std::abs(term)), at + " identity at T-1");
        }
        else
        {
            identity.update(rel_err(g_last, gamma_sum(1.0, m) / mu), at + " identity at T-1");
        }
    }
    return {finish(6, "g_strictly_increasing", 0.0, monotone, true, start, std::to_string(points) + " high-ratio points"),
            finish(6, "g_identity_and_oracles", 1e-9, identity, true, start)};
}

std::vector<CheckResult> tagged_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    const SimConfig cfg = mc_config(o, 100'000, 20'000, 7);
    Worst worst;
    int points = 0;
    // Position walk, A never balks.
    const std::vector<std::pair<int, double>> positions = {{1, 0.0}, {2, 0.5}, {3, 0.3}, {5, 1.0}, {4, 1.5}};
    for (const auto& [p, rho] : positions)
    {
        const ModelParams params = validate_params(RawParams{std::max(rho, 1e-300), 0.0, 1.0, 2.0, 1.0, 10.0, 1.0});
        const double lam = rho;
        const ModelParams sim_params = validate_params(RawParams{lam > 0 ? lam : 1e-300, 0.0, 1.0, 2.0, 1.0, 10.0, 1.0});
        TaggedScenario s;
        s.ahead = QueueState{0, p - 1};
        s.stay_limit = p;
        const TaggedEstimate est = estimate_tagged_metrics(s, sim_params, cfg);
        const std::string at = "position " + std::to_string(p) + " rho_a=" + fmt(rho);
        worst.update(z_score(est.p_hat, tamper("served_prob_position", served_prob_position(Position(p), rho), 1.05), est.p_se), at + " P");
        worst.update(z_score(est.e_hat, sojourn_position(Position(p), rho, 1.0), est.e_se), at + " E");
        ++points;
        (void)params;
    }
    // Fully-strategic high-ratio walk from the all-B composition.
    const std::vector<std::pair<RawParams, std::vector<int>>> fs = {
        {RawParams{0.5, 0.4, 1.0, 2.0, 1.0, 10.0, 1.0}, {3, 4, 5}},
        {RawParams{1.0, 0.4, 1.0, 3.0, 1.0, 20.0, 1.0}, {4, 5}},
    };
    for (const auto& [raw, ns] : fs)
    {
        const ModelParams params = validate_params(raw);
        const ThresholdSet th = compute_thresholds(params);
        for (int n : ns)
        {
            TaggedScenario s;
            s.ahead = QueueState{0, n};
            s.a_cap = th.a_equilibrium.value;
            s.stay_limit = th.b_stay;
            const TaggedEstimate est = estimate_tagged_metrics(s, params, cfg);
            const std::string at = "fs lambda_a=" + fmt(raw.lambda_a) + " n=" + std::to_string(n);
            worst.update(z_score(est.p_hat, tamper("fs_served_prob", fs_served_prob(n, params, th), 1.05), est.p_se), at + " P");
            worst.update(z_score(est.e_hat, fs_sojourn(n, params, th), est.e_se), at + " E");
            ++points;
        }
    }
    return {finish(7, "tagged_monte_carlo_vs_closed_forms", 3.0, worst, true, start,
                   std::to_string(points) + " points x " + std::to_string(cfg.replications) + " replications")};
}

std::vector<CheckResult> trapezoid_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    const SimConfig cfg = mc_config(o, 100'000, 20'000, 8);
    const int max_m = o.grid == Grid::Full ? 4 : 2;
    const int max_n = o.grid == Grid::Full ? 8 : 5;
    Worst mc, residual, routes;
    int specs = 0;
    for (int m = 1; m <= max_m; ++m)
    {
        for (int n = m + 1; n <= max_n; ++n)
        {
            const TrapezoidSpec spec{m, n, 0.6, 0.5, 1.0};
            const PlannerMetrics pm = b_planner_metrics(spec, QueueState{0, n});
            const TrapezoidSolution sol = solve_trapezoid(spec);
            const std::string at = "m*=" + std::to_string(m) + " n=" + std::to_string(n);
            residual.update(trapezoid_eta_residual(sol, spec), at);
            routes.update(std::max(rel_err(pm.p, pm.p_direct), rel_err(pm.e, pm.e_direct)), at);

            const ModelParams params = validate_params(RawParams{spec.lambda_a, spec.lambda_b, spec.mu, 1.0, 1.0, 1.0, 1.0});
            TaggedScenario s;
            s.ahead = QueueState{0, n - 1};
            s.a_cap = m;
            s.stay_limit = n;
            s.lcfs_b = true;
            const TaggedEstimate est = estimate_tagged_metrics(s, params, cfg);
            mc.update(z_score(est.p_hat, tamper("planner_p", pm.p, 1.05), est.p_se), at + " P");
            mc.update(z_score(est.e_hat, pm.e, est.e_se), at + " E");
            ++specs;
        }
    }
    return {finish(8, "trapezoid_vs_monte_carlo", 3.0, mc, true, start,
                   std::to_string(specs) + " trapezoids x " + std::to_string(cfg.replications) + " replications"),
            finish(8, "trapezoid_eta_residual", 1e-9, residual, true, start),
            finish(8, "trapezoid_prefactor_vs_direct", 1e-9, routes, true, start)};
}

std::vector<CheckResult> naor_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    Worst integers;
    int count = 0;
    for (const RawParams& raw : {RawParams{0.5, 0.0, 1.0, 5.0, 1.0, 1.0, 1.0}, RawParams{0.9, 0.0, 1.5, 7.3, 2.0, 1.0, 1.0},
                                 RawParams{1.0, 0.0, 1.0, 6.0, 1.0, 1.0, 1.0}, RawParams{1.4, 0.0, 1.0, 4.5, 1.0, 1.0, 1.0}})
    {
        const ModelParams params = validate_params(raw);
        const ThresholdSet th = compute_thresholds(params);
        const auto naor = static_cast<std::int64_t>(std::floor(raw.reward_a * raw.mu / raw.cost_a));
        const GlobalPlan plan = global_thresholds(params);
        const std::string at = "lambda_a=" + fmt(raw.lambda_a);
        if (tamper.shift("a_equilibrium", th.a_equilibrium.value) != naor || th.a_social.value > th.a_equilibrium.value ||
            plan.total_threshold.value != th.a_social.value || plan.favored_threshold.value != th.a_social.value)
        {
            integers.update(++count, at);
        }
    }
    CheckResult ints = finish(9, "naor_reductions_integers", 0.0, integers, true, start);

    const auto sim_start = Clock::now();
    SimConfig cfg;
    cfg.seed = o.seed;
    cfg.replications = 10;
    cfg.max_events = o.grid == Grid::Full ? 100'000 : 20'000;
    cfg.threads = o.threads;
    const ModelParams mm1 = validate_params(RawParams{0.5, 0.0, 1.0, 5.0, 1.0, 1.0, 1.0});
    const SimStats st = run_simulation(mm1, open_policy(), cfg);
    Worst sojourn;
    const Estimate ms = st.of(CustomerClass::A).mean_sojourn;
    sojourn.update(z_score(ms.mean, tamper("mm1_mean", 1.0 / (mm1.mu() - mm1.lambda_a()), 1.05), ms.se), "M/M/1 rho=0.5");
    CheckResult mm = finish(9, "mm1_mean_sojourn", 3.0, sojourn, true, sim_start,
                            "mean " + fmt(ms.mean) + " +- " + fmt(ms.se) + " over " + std::to_string(st.events) + " events");

    const auto w_start = Clock::now();
    Worst welfare;
    for (const RawParams& raw : {RawParams{0.5, 0.0, 1.0, 5.0, 1.0, 1.0, 1.0}, RawParams{0.9, 0.0, 1.0, 8.0, 1.0, 1.0, 1.0}})
    {
        const ModelParams params = validate_params(raw);
        const auto rows = welfare_compare(params, cfg);
        const Estimate d = rows[1].total_minus_equilibrium;
        // Social minus equilibrium, in standard errors below zero.
        welfare.update(d.se > 0 ? -d.mean / d.se : (d.mean < 0 ? 1e9 : 0.0), "lambda_a=" + fmt(raw.lambda_a));
    }
    CheckResult wc = finish(9, "social_welfare_at_least_equilibrium", 3.0, welfare, true, w_start);
    wc.seconds += ints.seconds;
    return {ints, mm, wc};
}

std::vector<CheckResult> audit_checks(const VerifyOptions& o)
{
    const auto start = Clock::now();
    const Tamper tamper(o);
    const SimConfig cfg = mc_config(o, 100'000, 10'000, 10);
    const auto grid = strategic_grid();
    Worst worst;
    int sets = 0;
    int entries = 0;
    const std::size_t stride = o.grid == Grid::Full ? 2 : 5;
    for (std::size_t k = 0; k < grid.size(); k += stride)
    {
        const ModelParams params = validate_params(grid[k]);
        ThresholdSet claimed = compute_thresholds(params);
        claimed.b_join = tamper.shift("audit_profile", claimed.b_join);
        claimed.b_stay = claimed.b_join + 1;
        const AuditReport rep = best_response_audit(params, EquilibriumProfile(claimed), cfg);
        ++sets;
        for (const AuditEntry& e : rep.entries)
        {
            ++entries;
            // Signed distance past the 3-SE band on the wrong side.
            const double z = e.estimate.payoff_se > 0 ? e.estimate.payoff / e.estimate.payoff_se : 0.0;
            const double wrong = e.profile_joins ? -z : z;
            worst.update(e.violation ? std::max(wrong, 3.0 + 1e-9) : std::min(wrong, 3.0),
                         "set " + std::to_string(k) + " " + std::string(to_string(e.who)) + " n=" + std::to_string(e.observed) + " ahead (" +
                             std::to_string(e.ahead.n_a) + "," + std::to_string(e.ahead.n_b) + ")");
        }
    }
    return {finish(10, "best_response_audit", 3.0, worst, true, start,
                   std::to_string(sets) + " parameter sets, " + std::to_string(entries) + " states")};
}

}  // namespace

const std::vector<std::string>& known_faults()
{
    static const std::vector<std::string> names = {
        "ruin_probability", "sojourn_position", "rect_expected_clear_time", "g_value", "b_join",
        "served_prob_position", "fs_served_prob", "planner_p", "a_equilibrium", "mm1_mean", "unit_branch", "audit_profile",
    };
    return names;
}

std::vector<RawParams> strategic_grid()
{
    std::vector<RawParams> grid;
    for (double lambda_a : {0.3, 0.5, 0.7, 1.0, 1.5})
    {
        for (double x_a : {2.6, 4.3})
        {
            for (double x_b : {1.7, 37.5})
            {
                grid.push_back(RawParams{lambda_a, 0.4, 1.0, x_a, 1.0, 2.0 * x_b, 2.0});
            }
        }
    }
    return grid;
}

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options)
{
    for (const std::string& f : options.faults)
    {
        if (std::find(known_faults().begin(), known_faults().end(), f) == known_faults().end())
        {
            throw Error(ErrorKind::ConfigError, "unknown fault '" + f + "'");
        }
    }
    switch (criterion)
    {
        case 1: return ruin_checks(options);
        case 2: return single_class_checks(options);
        case 3: return rectangle_checks(options);
        case 4: return continuity_checks(options);
        case 5: return sign_checks(options);
        case 6: return g_checks(options);
        case 7: return tagged_checks(options);
        case 8: return trapezoid_checks(options);
        case 9: return naor_checks(options);
        case 10: return audit_checks(options);
        default: throw Error(ErrorKind::ConfigError, "no criterion " + std::to_string(criterion));
    }
}

std::vector<CheckResult> run_all_checks(const VerifyOptions& options)
{
    std::vector<CheckResult> all;
    for (int c = 1; c <= kCriterionCount; ++c)
    {
        auto part = run_criterion(c, options);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

}  // namespace stratq
