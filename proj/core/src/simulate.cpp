#include "stratq/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <queue>
#include <thread>

#include "stratq/errors.hpp"
#include "stratq/rng.hpp"

namespace stratq
{

StrategyPolicy open_policy()
{
    return StrategyPolicy{};
}

StrategyPolicy equilibrium_policy(const ThresholdSet& thresholds)
{
    StrategyPolicy p;
    p.name = "equilibrium";
    p.priority = CustomerClass::A;
    p.priority_cap = thresholds.a_equilibrium.value;
    p.other_join_max = thresholds.b_join;
    p.other_stay_max = thresholds.b_stay;
    return p;
}

StrategyPolicy global_policy(const GlobalPlan& plan)
{
    StrategyPolicy p;
    p.name = "global_plan";
    p.priority = plan.favored_class;
    p.priority_cap = plan.favored_threshold.value;
    p.other_join_max = plan.total_threshold.value - 1;
    p.other_stay_max = plan.total_threshold.value;
    return p;
}

StrategyPolicy class_planner_policy(std::int64_t a_threshold, std::int64_t b_threshold)
{
    StrategyPolicy p;
    p.name = "class_planners";
    p.priority = CustomerClass::A;
    p.priority_cap = a_threshold;
    p.other_join_max = b_threshold - 1;
    p.other_stay_max = b_threshold;
    return p;
}

void SimConfig::validate() const
{
    if (replications < 1)
    {
        throw Error(ErrorKind::ConfigError, "replications must be >= 1");
    }
    if ((max_events > 0) == (max_time > 0.0))
    {
        throw Error(ErrorKind::ConfigError, "set exactly one of an event limit or a time limit");
    }
    if (max_time < 0.0 || max_events < 0 || !std::isfinite(max_time))
    {
        throw Error(ErrorKind::ConfigError, "horizon must be positive");
    }
    if (!(warmup >= 0.0 && warmup < 1.0))
    {
        throw Error(ErrorKind::ConfigError, "warmup must lie in [0, 1)");
    }
    if (!(snapshot_interval >= 0.0) || !std::isfinite(snapshot_interval))
    {
        throw Error(ErrorKind::ConfigError, "snapshot interval must be finite and nonnegative");
    }
}

namespace
{

enum StreamId : std::uint64_t
{
    kStreamArrivalA = 0,
    kStreamArrivalB = 1,
    kStreamService = 2,
    kStreamTagged = 3,
};

enum class EventKind : std::uint8_t
{
    ArrivalA,
    ArrivalB,
    Departure,
};

struct Event
{
    double time;
    std::uint64_t seq;
    EventKind kind;
    std::uint64_t token;
};

struct LaterFirst
{
    bool operator()(const Event& x, const Event& y) const noexcept
    {
        return x.time != y.time ? x.time > y.time : x.seq > y.seq;
    }
};

struct Customer
{
    double arrival;
    double remaining;  // residual mode only; < 0 means untouched
};

struct ClassTally
{
    std::int64_t arrivals = 0;
    std::int64_t served = 0;
    std::int64_t balked = 0;
    std::int64_t reneged = 0;
    std::int64_t in_system_end = 0;
    double reward = 0.0;
    double cost = 0.0;
    double sojourn_sum = 0.0;
    std::int64_t sojourn_count = 0;
};

struct Replication
{
    std::array<ClassTally, 2> tally;
    double measured_time = 0.0;
    std::map<StateKey, double> occupancy;
    std::map<StateKey, std::int64_t> snapshots;
    std::int64_t events = 0;
    bool conserved = true;
    bool monotone = true;
};

std::size_t slot(CustomerClass c) { return static_cast<std::size_t>(c); }

CustomerClass other_class(CustomerClass c) { return c == CustomerClass::A ? CustomerClass::B : CustomerClass::A; }

class Simulator
{
public:
    Simulator(const ModelParams& params, const StrategyPolicy& policy, const SimConfig& config, int rep)
        : params_(params),
          policy_(policy),
          config_(config),
          arrivals_{RandomStream(config.seed, static_cast<std::uint64_t>(rep), kStreamArrivalA),
                    RandomStream(config.seed, static_cast<std::uint64_t>(rep), kStreamArrivalB)},
          service_(config.seed, static_cast<std::uint64_t>(rep), kStreamService)
    {
    }

    Replication run()
    {
        const bool by_events = config_.max_events > 0;
        const auto warm_events = static_cast<std::int64_t>(config_.warmup * static_cast<double>(config_.max_events));
        const double warm_time = by_events ? 0.0 : config_.warmup * config_.max_time;
        if (!by_events)
        {
            measure_from_ = warm_time;
        }
        else if (warm_events == 0)
        {
            measure_from_ = 0.0;
        }
        next_snapshot_ = measure_from_;

        schedule_arrival(CustomerClass::A);
        schedule_arrival(CustomerClass::B);

        while (!events_.empty())
        {
            const Event ev = events_.top();
            if (!by_events && ev.time > config_.max_time)
            {
                advance_to(config_.max_time);
                break;
            }
            events_.pop();
            if (ev.kind == EventKind::Departure && ev.token != service_token_)
            {
                continue;
            }
            if (ev.time < now_)
            {
                out_.monotone = false;
            }
            advance_to(ev.time);
            switch (ev.kind)
            {
                case EventKind::ArrivalA: on_arrival(CustomerClass::A); break;
                case EventKind::ArrivalB: on_arrival(CustomerClass::B); break;
                case EventKind::Departure: on_departure(); break;
            }
            ++out_.events;
            if (by_events)
            {
                if (measure_from_ < 0.0 && out_.events >= warm_events)
                {
                    measure_from_ = now_;
                    next_snapshot_ = now_;
                }
                if (out_.events >= config_.max_events)
                {
                    break;
                }
            }
        }

        out_.measured_time = measure_from_ >= 0.0 ? now_ - measure_from_ : 0.0;
        for (CustomerClass c : {CustomerClass::A, CustomerClass::B})
        {
            ClassTally& t = out_.tally[slot(c)];
            t.in_system_end = static_cast<std::int64_t>(queue_[slot(c)].size());
            if (t.arrivals != t.served + t.balked + t.reneged + t.in_system_end)
            {
                out_.conserved = false;
            }
        }
        return std::move(out_);
    }

private:
    bool measuring() const noexcept { return measure_from_ >= 0.0; }

    std::int64_t count(CustomerClass c) const { return static_cast<std::int64_t>(queue_[slot(c)].size()); }
    std::int64_t total() const { return count(CustomerClass::A) + count(CustomerClass::B); }

    StateKey state() const { return {static_cast<int>(count(CustomerClass::A)), static_cast<int>(count(CustomerClass::B))}; }

    void push(double time, EventKind kind, std::uint64_t token = 0) { events_.push(Event{time, seq_++, kind, token}); }

    void schedule_arrival(CustomerClass c)
    {
        const double rate = params_.lambda(c);
        if (rate <= 0.0)
        {
            return;
        }
        push(now_ + arrivals_[slot(c)].exponential(rate),
             c == CustomerClass::A ? EventKind::ArrivalA : EventKind::ArrivalB);
    }

    void advance_to(double t)
    {
        if (measuring())
        {
            const double from = std::max(now_, measure_from_);
            if (t > from)
            {
                const double dt = t - from;
                for (CustomerClass c : {CustomerClass::A, CustomerClass::B})
                {
                    out_.tally[slot(c)].cost += params_.cost(c) * static_cast<double>(count(c)) * dt;
                }
                out_.occupancy[state()] += dt;
            }
            if (config_.snapshot_interval > 0.0)
            {
                while (next_snapshot_ <= t)
                {
                    ++out_.snapshots[state()];
                    next_snapshot_ += config_.snapshot_interval;
                }
            }
        }
        now_ = t;
    }

    // Class at the head of service, if anyone is present.
    bool head(CustomerClass& c) const
    {
        const CustomerClass hi = policy_.priority;
        if (!queue_[slot(hi)].empty())
        {
            c = hi;
            return true;
        }
        if (!queue_[slot(other_class(hi))].empty())
        {
            c = other_class(hi);
            return true;
        }
        return false;
    }

    // Called whenever the head of service may have changed.
    void reschedule_service()
    {
        CustomerClass c;
        const bool busy = head(c);
        Customer* next = busy ? &queue_[slot(c)].front() : nullptr;
        if (next == in_service_)
        {
            return;
        }
        if (in_service_ != nullptr && config_.resume == ResumeMode::Residual)
        {
            in_service_->remaining = service_due_ - now_;
        }
        ++service_token_;
        in_service_ = next;
        if (next == nullptr)
        {
            return;
        }
        double work;
        if (config_.resume == ResumeMode::Residual && next->remaining >= 0.0)
        {
            work = next->remaining;
        }
        else
        {
            work = service_.exponential(params_.mu());
        }
        service_due_ = now_ + work;
        push(service_due_, EventKind::Departure, service_token_);
    }

    void on_arrival(CustomerClass c)
    {
        schedule_arrival(c);
        ClassTally& t = out_.tally[slot(c)];
        ++t.arrivals;
        const bool is_priority = c == policy_.priority;
        const bool joins = is_priority ? policy_.priority_join(count(c)) : policy_.other_join(total());
        if (!joins)
        {
            ++t.balked;
            return;
        }
        // Pointers into a deque stay valid under push_back/pop_front.
        queue_[slot(c)].push_back(Customer{now_, -1.0});
        if (total() > kOccupancyGuard)
        {
            throw Error(ErrorKind::OverflowGuard, "occupancy exceeded " + std::to_string(kOccupancyGuard));
        }
        if (is_priority)
        {
            auto& low = queue_[slot(other_class(c))];
            while (!low.empty() && !policy_.other_stay(Position(static_cast<int>(std::min<std::int64_t>(total(), 1 << 30)))))
            {
                if (&low.back() == in_service_)
                {
                    in_service_ = nullptr;
                    ++service_token_;
                }
                low.pop_back();
                ++out_.tally[slot(other_class(c))].reneged;
            }
        }
        reschedule_service();
    }

    void on_departure()
    {
        CustomerClass c;
        if (!head(c))
        {
            return;
        }
        auto& q = queue_[slot(c)];
        ClassTally& t = out_.tally[slot(c)];
        ++t.served;
        if (measuring() && q.front().arrival >= measure_from_)
        {
            t.sojourn_sum += now_ - q.front().arrival;
            ++t.sojourn_count;
        }
        if (measuring())
        {
            t.reward += params_.reward(c);
        }
        in_service_ = nullptr;
        q.pop_front();
        reschedule_service();
    }

    const ModelParams& params_;
    const StrategyPolicy& policy_;
    const SimConfig& config_;
    std::array<RandomStream, 2> arrivals_;
    RandomStream service_;
    std::priority_queue<Event, std::vector<Event>, LaterFirst> events_;
    std::array<std::deque<Customer>, 2> queue_;
    Customer* in_service_ = nullptr;
    double service_due_ = 0.0;
    std::uint64_t service_token_ = 0;
    std::uint64_t seq_ = 0;
    double now_ = 0.0;
    double measure_from_ = -1.0;
    double next_snapshot_ = 0.0;
    Replication out_;
};

// Mean and standard error of the mean.
Estimate summarize(const std::vector<double>& xs)
{
    Estimate e;
    if (xs.empty())
    {
        return e;
    }
    double sum = 0.0;
    for (double x : xs)
    {
        sum += x;
    }
    e.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1)
    {
        double ss = 0.0;
        for (double x : xs)
        {
            ss += (x - e.mean) * (x - e.mean);
        }
        e.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return e;
}

// Runs body(rep) for every replication, fanning out over threads; results
// land by index so the merge order never depends on scheduling.
template <class Result, class Body>
std::vector<Result> fan_out(int replications, unsigned threads, Body body)
{
    std::vector<Result> results(static_cast<std::size_t>(replications));
    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(replications));
    if (workers <= 1)
    {
        for (int r = 0; r < replications; ++r)
        {
            results[static_cast<std::size_t>(r)] = body(r);
        }
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            try
            {
                for (int r = next++; r < replications; r = next++)
                {
                    results[static_cast<std::size_t>(r)] = body(r);
                }
            }
            catch (...)
            {
                errors[w] = std::current_exception();
                next = replications;
            }
        });
    }
    for (auto& t : pool)
    {
        t.join();
    }
    for (auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    return results;
}

}  // namespace

SimStats run_simulation(const ModelParams& params, const StrategyPolicy& policy, const SimConfig& config)
{
    config.validate();
    const auto reps = fan_out<Replication>(config.replications, config.threads, [&](int r) {
        return Simulator(params, policy, config, r).run();
    });

    SimStats stats;
    stats.replications = config.replications;
    std::array<std::vector<double>, 2> sojourn, welfare;
    double occupancy_time = 0.0;
    for (const Replication& rep : reps)
    {
        stats.events += rep.events;
        stats.conservation_ok = stats.conservation_ok && rep.conserved;
        stats.time_monotone = stats.time_monotone && rep.monotone;
        double total = 0.0;
        for (std::size_t c = 0; c < 2; ++c)
        {
            const ClassTally& t = rep.tally[c];
            ClassSummary& s = stats.per_class[c];
            s.arrivals += t.arrivals;
            s.served += t.served;
            s.balked += t.balked;
            s.reneged += t.reneged;
            s.in_system_end += t.in_system_end;
            if (t.sojourn_count > 0)
            {
                sojourn[c].push_back(t.sojourn_sum / static_cast<double>(t.sojourn_count));
            }
            const double w = rep.measured_time > 0.0 ? (t.reward - t.cost) / rep.measured_time : 0.0;
            welfare[c].push_back(w);
            total += w;
        }
        stats.replication_total_welfare.push_back(total);
        for (const auto& [k, v] : rep.occupancy)
        {
            stats.occupancy[k] += v;
            occupancy_time += v;
        }
        for (const auto& [k, v] : rep.snapshots)
        {
            stats.snapshots[k] += v;
        }
    }
    if (occupancy_time > 0.0)
    {
        for (auto& entry : stats.occupancy)
        {
            entry.second /= occupancy_time;
        }
    }
    for (std::size_t c = 0; c < 2; ++c)
    {
        stats.per_class[c].mean_sojourn = summarize(sojourn[c]);
        stats.per_class[c].welfare_rate = summarize(welfare[c]);
    }
    stats.total_welfare_rate = summarize(stats.replication_total_welfare);
    return stats;
}

TaggedEstimate estimate_tagged_metrics(const TaggedScenario& scenario, const ModelParams& params, const SimConfig& config)
{
    if (config.replications < 1)
    {
        throw Error(ErrorKind::ConfigError, "replications must be >= 1");
    }
    if (scenario.ahead.n_a < 0 || scenario.ahead.n_b < 0 || scenario.stay_limit < 1)
    {
        throw Error(ErrorKind::ConfigError, "tagged start must be nonnegative with a positive stay limit");
    }
    const CustomerClass who = scenario.tagged;
    const double mu = params.mu();
    const double lam_a = params.lambda_a();
    const double lam_b = scenario.lcfs_b ? params.lambda_b() : 0.0;

    struct Draw
    {
        double served;
        double sojourn;
    };
    const auto draws = fan_out<Draw>(config.replications, config.threads, [&](int r) {
        RandomStream rng(config.seed, static_cast<std::uint64_t>(r), kStreamTagged);
        std::int64_t a = scenario.ahead.n_a;
        std::int64_t b = scenario.ahead.n_b;
        double t = 0.0;
        if (who == CustomerClass::A)
        {
            for (std::int64_t k = 0; k <= a; ++k)
            {
                t += rng.exponential(mu);
            }
            return Draw{1.0, t};
        }
        if (a + b + 1 > scenario.stay_limit)
        {
            return Draw{0.0, 0.0};
        }
        while (true)
        {
            const double up_a = a < scenario.a_cap ? lam_a : 0.0;
            const double rate = up_a + lam_b + mu;
            t += rng.exponential(rate);
            const double u = rng.uniform() * rate;
            if (u < mu)
            {
                if (a > 0)
                {
                    --a;
                }
                else if (b > 0)
                {
                    --b;
                }
                else
                {
                    return Draw{1.0, t};
                }
            }
            else
            {
                (u < mu + up_a ? a : b) += 1;
                if (a + b + 1 > scenario.stay_limit)
                {
                    return Draw{0.0, t};
                }
            }
        }
    });

    std::vector<double> served, sojourn, payoff;
    served.reserve(draws.size());
    for (const Draw& d : draws)
    {
        served.push_back(d.served);
        sojourn.push_back(d.sojourn);
        payoff.push_back(params.reward(who) * d.served - params.cost(who) * d.sojourn);
    }
    TaggedEstimate out;
    const Estimate p = summarize(served);
    const Estimate e = summarize(sojourn);
    const Estimate g = summarize(payoff);
    out.p_hat = p.mean;
    out.p_se = p.se;
    out.e_hat = e.mean;
    out.e_se = e.se;
    out.payoff = g.mean;
    out.payoff_se = g.se;
    out.replications = config.replications;
    return out;
}

bool AuditReport::ok() const
{
    return std::none_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.violation; });
}

AuditReport best_response_audit(const ModelParams& params, const EquilibriumProfile& profile, const SimConfig& config)
{
    const ThresholdSet& th = profile.thresholds();
    const std::int64_t m = th.a_equilibrium.value;
    AuditReport report;

    auto judge = [](AuditEntry& e) {
        const double z = 3.0 * e.estimate.payoff_se;
        e.violation = e.profile_joins ? e.estimate.payoff < -z : e.estimate.payoff > z;
    };

    for (std::int64_t n = th.b_join - 1; n <= th.b_join + 1; ++n)
    {
        if (n < 0)
        {
            continue;
        }
        const std::int64_t max_a = std::min(n, m);
        std::vector<std::int64_t> compositions = {0};
        if (max_a > 0)
        {
            compositions.push_back(max_a);
        }
        for (std::int64_t a : compositions)
        {
            AuditEntry e;
            e.who = CustomerClass::B;
            e.ahead = QueueState{static_cast<int>(a), static_cast<int>(n - a)};
            e.observed = n;
            e.profile_joins = profile.b_join(n);
            TaggedScenario s;
            s.tagged = CustomerClass::B;
            s.ahead = e.ahead;
            s.a_cap = m;
            s.stay_limit = std::max(th.b_stay, n + 1);
            e.estimate = estimate_tagged_metrics(s, params, config);
            judge(e);
            report.entries.push_back(e);
        }
    }
    for (std::int64_t na : {m - 1, m})
    {
        if (na < 0)
        {
            continue;
        }
        AuditEntry e;
        e.who = CustomerClass::A;
        e.ahead = QueueState{static_cast<int>(na), 0};
        e.observed = na;
        e.profile_joins = profile.a_join(na);
        TaggedScenario s;
        s.tagged = CustomerClass::A;
        s.ahead = e.ahead;
        e.estimate = estimate_tagged_metrics(s, params, config);
        judge(e);
        report.entries.push_back(e);
    }
    return report;
}

std::vector<WelfareRow> welfare_compare(const ModelParams& params, const SimConfig& config)
{
    const ThresholdSet th = compute_thresholds(params);
    const GlobalPlan plan = global_thresholds(params);
    const std::int64_t a_star = a_planner_threshold(params).value;
    const std::int64_t b_star = b_planner_threshold(params);
    const std::vector<StrategyPolicy> policies = {
        equilibrium_policy(th),
        global_policy(plan),
        class_planner_policy(a_star, b_star),
    };

    std::vector<WelfareRow> rows;
    std::vector<double> base;
    for (const StrategyPolicy& policy : policies)
    {
        const SimStats s = run_simulation(params, policy, config);
        WelfareRow row;
        row.scenario = policy.name;
        row.welfare_a = s.of(CustomerClass::A).welfare_rate;
        row.welfare_b = s.of(CustomerClass::B).welfare_rate;
        row.total = s.total_welfare_rate;
        if (base.empty())
        {
            base = s.replication_total_welfare;
        }
        std::vector<double> diff;
        for (std::size_t r = 0; r < base.size(); ++r)
        {
            diff.push_back(s.replication_total_welfare[r] - base[r]);
        }
        row.total_minus_equilibrium = summarize(diff);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace stratq
