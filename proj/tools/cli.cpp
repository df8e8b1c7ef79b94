#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stratq/errors.hpp"
#include "stratq/planner.hpp"
#include "stratq/series.hpp"
#include "stratq/strategic.hpp"

namespace stratq::cli
{

namespace
{

const std::vector<std::string> kParamKeys = {"lambda_a", "lambda_b", "mu", "reward_a", "cost_a", "reward_b", "cost_b"};
const std::vector<std::string> kSimKeys = {"seed",   "replications",      "max_events", "max_time",
                                           "warmup", "snapshot_interval", "resume",     "threads"};

double& param_ref(RawParams& raw, const std::string& key)
{
    if (key == "lambda_a") return raw.lambda_a;
    if (key == "lambda_b") return raw.lambda_b;
    if (key == "mu") return raw.mu;
    if (key == "reward_a") return raw.reward_a;
    if (key == "cost_a") return raw.cost_a;
    if (key == "reward_b") return raw.reward_b;
    if (key == "cost_b") return raw.cost_b;
    throw Error(ErrorKind::ConfigError, "unknown parameter '" + key + "'", key);
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where)
{
    std::vector<std::string> unknown;
    for (const auto& item : obj.items())
    {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
        {
            unknown.push_back(item.key());
        }
    }
    if (!unknown.empty())
    {
        std::string list;
        for (const auto& k : unknown)
        {
            list += (list.empty() ? "" : ",") + k;
        }
        throw Error(ErrorKind::UnknownKeys, "unknown keys in " + where + ": " + list, list);
    }
}

double number_at(const json& obj, const std::string& key)
{
    const auto it = obj.find(key);
    if (it == obj.end())
    {
        throw Error(ErrorKind::MissingKey, "missing key '" + key + "'", key);
    }
    if (!it->is_number())
    {
        throw Error(ErrorKind::ConfigError, "key '" + key + "' must be a number", key);
    }
    return it->get<double>();
}

json bracket_json(const ThresholdBracket& b)
{
    return {{"value", b.value}, {"real_root", b.real_root}, {"bracket", {b.at, b.next}}};
}

std::string csv_header_line(const json& m)
{
    return "# manifest: " + m.dump() + "\n";
}

std::string csv_field(const json& v)
{
    if (v.is_null())
    {
        return "";
    }
    if (v.is_string())
    {
        return v.get<std::string>();
    }
    if (v.is_number_float())
    {
        return format_double(v.get<double>());
    }
    if (v.is_boolean())
    {
        return v.get<bool>() ? "true" : "false";
    }
    return v.dump();
}

json estimate_json(const Estimate& e)
{
    return {{"mean", e.mean}, {"se", e.se}};
}

StrategyPolicy policy_by_name(const std::string& name, const ModelParams& params)
{
    if (name == "open") return open_policy();
    if (name == "equilibrium") return equilibrium_policy(compute_thresholds(params));
    if (name == "global") return global_policy(global_thresholds(params));
    if (name == "class_planner") return class_planner_policy(a_planner_threshold(params).value, b_planner_threshold(params));
    throw Error(ErrorKind::ConfigError, "unknown policy '" + name + "'", name);
}

json with_runtime(json m, double seconds)
{
    m["runtime_seconds"] = seconds;
    return m;
}

RunResult run_thresholds(const Invocation& inv)
{
    const json doc = thresholds_document(validate_params(inv.raw));
    RunResult r;
    r.stdout_text = doc.dump(2) + "\n";
    r.files.push_back({"thresholds.json", doc.dump()});
    return r;
}

RunResult run_verify(const Invocation& inv)
{
    VerifyOptions opts;
    opts.grid = inv.grid;
    opts.seed = inv.sim.seed;
    opts.threads = inv.sim.threads;
    opts.faults = {inv.faults.begin(), inv.faults.end()};
    json checks = json::array();
    json criteria = json::array();
    bool all = true;
    std::ostringstream out;
    for (int c = 1; c <= kCriterionCount; ++c)
    {
        const auto parts = run_criterion(c, opts);
        bool ok = true;
        double seconds = 0.0;
        for (const auto& p : parts)
        {
            ok = ok && p.within_tolerance;
            seconds += p.seconds;
            checks.push_back({{"criterion", p.criterion},
                              {"name", p.name},
                              {"tolerance", p.tolerance},
                              {"observed", p.observed},
                              {"within_tolerance", p.within_tolerance},
                              {"seconds", p.seconds},
                              {"detail", p.detail}});
        }
        const double limit = parts.front().time_limit;
        ok = ok && seconds < limit;
        all = all && ok;
        criteria.push_back({{"criterion", c}, {"pass", ok}, {"seconds", seconds}, {"time_limit", limit}});
        out << "criterion " << c << ": " << (ok ? "PASS" : "FAIL");
        for (const auto& p : parts)
        {
            if (!p.within_tolerance)
            {
                out << "  failed " << p.name << " (observed " << format_double(p.observed) << ", tolerance "
                    << format_double(p.tolerance) << ")";
            }
        }
        out << "\n";
    }
    RunResult r;
    r.exit_code = all ? 0 : 1;
    r.stdout_text = out.str();
    r.files.push_back({"verify.json", json{{"pass", all}, {"criteria", criteria}, {"checks", checks}}.dump()});
    return r;
}

json stats_json(const SimStats& st, const std::string& policy)
{
    json classes = json::object();
    for (CustomerClass c : {CustomerClass::A, CustomerClass::B})
    {
        const ClassSummary& s = st.of(c);
        classes[std::string(to_string(c))] = {{"arrivals", s.arrivals},
                                              {"served", s.served},
                                              {"balked", s.balked},
                                              {"reneged", s.reneged},
                                              {"in_system_end", s.in_system_end},
                                              {"mean_sojourn", estimate_json(s.mean_sojourn)},
                                              {"welfare_rate", estimate_json(s.welfare_rate)}};
    }
    json snaps = json::array();
    for (const auto& [k, count] : st.snapshots)
    {
        snaps.push_back({{"n_a", k.first}, {"n_b", k.second}, {"count", count}});
    }
    return {{"policy", policy},
            {"classes", classes},
            {"total_welfare_rate", estimate_json(st.total_welfare_rate)},
            {"replication_total_welfare", st.replication_total_welfare},
            {"events", st.events},
            {"replications", st.replications},
            {"conservation_ok", st.conservation_ok},
            {"time_monotone", st.time_monotone},
            {"snapshots", snaps}};
}

RunResult run_simulate(const Invocation& inv)
{
    const ModelParams params = validate_params(inv.raw);
    const SimStats st = run_simulation(params, policy_by_name(inv.policy, params), inv.sim);
    RunResult r;
    r.files.push_back({"simulate.json", stats_json(st, inv.policy).dump()});
    std::string csv = "n_a,n_b,time_fraction\n";
    for (const auto& [k, frac] : st.occupancy)
    {
        csv += std::to_string(k.first) + "," + std::to_string(k.second) + "," + format_double(frac) + "\n";
    }
    r.files.push_back({"occupancy.csv", csv});
    r.stdout_text = "total welfare rate " + format_double(st.total_welfare_rate.mean) + " +- " +
                    format_double(st.total_welfare_rate.se) + "\n";
    return r;
}

RunResult run_compare(const Invocation& inv)
{
    const ModelParams params = validate_params(inv.raw);
    const auto rows = welfare_compare(params, inv.sim);
    std::string csv = "scenario,welfare_a,welfare_a_se,welfare_b,welfare_b_se,total,total_se,total_minus_equilibrium,"
                      "total_minus_equilibrium_se\n";
    json table = json::array();
    std::ostringstream out;
    for (const WelfareRow& row : rows)
    {
        csv += row.scenario;
        for (const Estimate& e : {row.welfare_a, row.welfare_b, row.total, row.total_minus_equilibrium})
        {
            csv += "," + format_double(e.mean) + "," + format_double(e.se);
        }
        csv += "\n";
        table.push_back({{"scenario", row.scenario},
                         {"welfare_a", estimate_json(row.welfare_a)},
                         {"welfare_b", estimate_json(row.welfare_b)},
                         {"total", estimate_json(row.total)},
                         {"total_minus_equilibrium", estimate_json(row.total_minus_equilibrium)}});
        out << row.scenario << ": total " << format_double(row.total.mean) << " +- " << format_double(row.total.se) << "\n";
    }
    RunResult r;
    r.files.push_back({"compare.csv", csv});
    r.files.push_back({"compare.json", json{{"rows", table}}.dump()});
    r.stdout_text = out.str();
    return r;
}

RunResult run_sweep(const Invocation& inv)
{
    if (!inv.sweep)
    {
        throw Error(ErrorKind::ConfigError, "sweep needs a parameter and a range");
    }
    const SweepSpec& sw = *inv.sweep;
    std::vector<std::string> cols = {sw.parameter, "rho_a", "rho", "a_equilibrium", "a_social", "b_semi", "regime",
                                     "b_join", "b_stay", "v", "t", "favored_class", "favored_threshold",
                                     "total_threshold", "b_planner"};
    if (sw.welfare)
    {
        cols.insert(cols.end(), {"equilibrium_welfare", "equilibrium_welfare_se"});
    }
    std::string csv;
    for (std::size_t i = 0; i < cols.size(); ++i)
    {
        csv += (i ? "," : "") + cols[i];
    }
    csv += "\n";
    for (double x : sw.points())
    {
        RawParams raw = inv.raw;
        param_ref(raw, sw.parameter) = x;
        const ModelParams params = validate_params(raw);
        const json th = thresholds_document(params);
        const Utilizations u = utilizations(params);
        auto value_of = [](const json& v) { return v.is_object() ? v.at("value") : v; };
        std::vector<json> row = {x,
                                 u.rho_a,
                                 u.rho,
                                 th["a_equilibrium"]["value"],
                                 th["a_social"]["value"],
                                 value_of(th["b_semi"]),
                                 th["regime"],
                                 value_of(th["b_join"]),
                                 value_of(th["b_stay"]),
                                 value_of(th["v"]),
                                 value_of(th["t"]),
                                 th["global_plan"]["favored_class"],
                                 th["global_plan"]["favored_threshold"]["value"],
                                 th["global_plan"]["total_threshold"]["value"],
                                 th["b_planner"].is_object() && th["b_planner"].contains("value") ? th["b_planner"]["value"] : json()};
        if (sw.welfare)
        {
            const SimStats st = run_simulation(params, equilibrium_policy(compute_thresholds(params)), inv.sim);
            row.push_back(st.total_welfare_rate.mean);
            row.push_back(st.total_welfare_rate.se);
        }
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            csv += (i ? "," : "") + csv_field(row[i]);
        }
        csv += "\n";
    }
    RunResult r;
    r.files.push_back({"sweep.csv", csv});
    r.stdout_text = std::to_string(sw.points().size()) + " rows\n";
    return r;
}

}  // namespace

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SimConfig default_sim_config()
{
    SimConfig c;
    c.seed = 20240611;
    c.replications = 10;
    c.max_events = 100'000;
    return c;
}

ConfigFile parse_config(const json& doc)
{
    if (!doc.is_object())
    {
        throw Error(ErrorKind::ConfigError, "config must be a JSON object");
    }
    std::vector<std::string> allowed = kParamKeys;
    allowed.push_back("sim");
    reject_unknown(doc, allowed, "config");
    ConfigFile cfg;
    for (const auto& key : kParamKeys)
    {
        param_ref(cfg.raw, key) = number_at(doc, key);
    }
    validate_params(cfg.raw);
    if (const auto it = doc.find("sim"); it != doc.end())
    {
        cfg.sim = sim_from_json(*it);
    }
    return cfg;
}

ConfigFile load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::ConfigError, "cannot read config '" + path + "'", path);
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorKind::ConfigError, std::string("malformed JSON: ") + e.what(), path);
    }
    return parse_config(doc);
}

json params_to_json(const RawParams& raw)
{
    return {{"lambda_a", raw.lambda_a}, {"lambda_b", raw.lambda_b}, {"mu", raw.mu},         {"reward_a", raw.reward_a},
            {"cost_a", raw.cost_a},     {"reward_b", raw.reward_b}, {"cost_b", raw.cost_b}};
}

json sim_to_json(const SimConfig& sim)
{
    return {{"seed", sim.seed},
            {"replications", sim.replications},
            {"max_events", sim.max_events},
            {"max_time", sim.max_time},
            {"warmup", sim.warmup},
            {"snapshot_interval", sim.snapshot_interval},
            {"resume", sim.resume == ResumeMode::Redraw ? "redraw" : "residual"},
            {"threads", sim.threads}};
}

SimConfig sim_from_json(const json& doc)
{
    if (!doc.is_object())
    {
        throw Error(ErrorKind::ConfigError, "\"sim\" must be an object");
    }
    reject_unknown(doc, kSimKeys, "sim");
    SimConfig c = default_sim_config();
    try
    {
        if (doc.contains("max_events") || doc.contains("max_time"))
        {
            c.max_events = 0;
        }
        if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("replications")) c.replications = doc.at("replications").get<int>();
        if (doc.contains("max_events")) c.max_events = doc.at("max_events").get<std::int64_t>();
        if (doc.contains("max_time")) c.max_time = doc.at("max_time").get<double>();
        if (doc.contains("warmup")) c.warmup = doc.at("warmup").get<double>();
        if (doc.contains("snapshot_interval")) c.snapshot_interval = doc.at("snapshot_interval").get<double>();
        if (doc.contains("threads")) c.threads = doc.at("threads").get<unsigned>();
        if (doc.contains("resume"))
        {
            const std::string mode = doc.at("resume").get<std::string>();
            if (mode != "redraw" && mode != "residual")
            {
                throw Error(ErrorKind::ConfigError, "resume must be \"redraw\" or \"residual\"", mode);
            }
            c.resume = mode == "redraw" ? ResumeMode::Redraw : ResumeMode::Residual;
        }
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorKind::ConfigError, std::string("bad \"sim\" field: ") + e.what());
    }
    c.validate();
    return c;
}

std::vector<double> SweepSpec::points() const
{
    std::vector<double> out;
    const auto count = static_cast<std::int64_t>(std::floor((to - from) / step + 1e-9));
    for (std::int64_t k = 0; k <= count; ++k)
    {
        out.push_back(from + static_cast<double>(k) * step);
    }
    return out;
}

SweepSpec parse_sweep(const std::string& parameter, const std::string& range, double step)
{
    RawParams probe;
    param_ref(probe, parameter);
    const auto dots = range.find("..");
    if (dots == std::string::npos)
    {
        throw Error(ErrorKind::ConfigError, "range must look like FROM..TO", range);
    }
    SweepSpec s;
    s.parameter = parameter;
    try
    {
        s.from = std::stod(range.substr(0, dots));
        s.to = std::stod(range.substr(dots + 2));
    }
    catch (const std::exception&)
    {
        throw Error(ErrorKind::ConfigError, "range must look like FROM..TO", range);
    }
    s.step = step;
    if (!(step > 0.0) || !(s.to >= s.from) || !std::isfinite(s.from) || !std::isfinite(s.to))
    {
        throw Error(ErrorKind::ConfigError, "need FROM <= TO and a positive step", range);
    }
    if ((s.to - s.from) / step > 1e6)
    {
        throw Error(ErrorKind::ConfigError, "sweep has more than a million points", range);
    }
    return s;
}

json manifest(const Invocation& inv, const std::vector<std::string>& outputs)
{
    json config = inv.has_params ? params_to_json(inv.raw) : json::object();
    config["sim"] = sim_to_json(inv.sim);
    json m = {{"tool", "stratq"},
              {"version", kToolVersion},
              {"schema_version", kSchemaVersion},
              {"command", inv.command},
              {"config", config},
              {"grid", inv.grid == Grid::Small ? "small" : "full"},
              {"policy", inv.policy},
              {"outputs", outputs}};
    if (inv.sweep)
    {
        m["sweep"] = {{"parameter", inv.sweep->parameter},
                      {"from", inv.sweep->from},
                      {"to", inv.sweep->to},
                      {"step", inv.sweep->step},
                      {"welfare", inv.sweep->welfare}};
    }
    if (!inv.faults.empty())
    {
        m["faults"] = inv.faults;
    }
    return m;
}

Invocation invocation_from_manifest(const json& m)
{
    try
    {
        Invocation inv;
        inv.command = m.at("command").get<std::string>();
        const json& config = m.at("config");
        inv.has_params = config.contains("lambda_a");
        if (inv.has_params)
        {
            const ConfigFile cfg = parse_config(config);
            inv.raw = cfg.raw;
            inv.sim = cfg.sim.value_or(default_sim_config());
        }
        else
        {
            reject_unknown(config, {"sim"}, "config");
            inv.sim = sim_from_json(config.at("sim"));
        }
        inv.grid = m.at("grid").get<std::string>() == "small" ? Grid::Small : Grid::Full;
        inv.policy = m.at("policy").get<std::string>();
        if (m.contains("sweep"))
        {
            const json& s = m.at("sweep");
            inv.sweep = SweepSpec{s.at("parameter").get<std::string>(), s.at("from").get<double>(), s.at("to").get<double>(),
                                  s.at("step").get<double>(), s.at("welfare").get<bool>()};
        }
        if (m.contains("faults"))
        {
            inv.faults = m.at("faults").get<std::vector<std::string>>();
        }
        return inv;
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorKind::ConfigError, std::string("malformed manifest: ") + e.what());
    }
}

json thresholds_document(const ModelParams& params)
{
    const ThresholdSet th = compute_thresholds(params);
    const bool has_b = params.lambda_b() > 0.0;
    json doc;
    doc["a_equilibrium"] = {{"value", th.a_equilibrium.value}, {"real_root", th.a_equilibrium.real_root}};
    doc["a_social"] = bracket_json(th.a_social);
    doc["b_semi"] = nullptr;
    doc["regime"] = nullptr;
    doc["b_join"] = nullptr;
    doc["b_stay"] = nullptr;
    doc["v"] = nullptr;
    doc["t"] = nullptr;
    doc["b_planner"] = nullptr;
    if (has_b)
    {
        if (th.b_semi)
        {
            doc["b_semi"] = bracket_json(*th.b_semi);
            doc["b_semi"]["stable"] = true;
        }
        else
        {
            doc["b_semi"] = "unstable";
        }
        doc["regime"] = to_string(th.regime);
        if (th.regime == Regime::LowRatio)
        {
            doc["b_join"] = bracket_json(th.b_low);
        }
        else
        {
            const HighRatioThresholds& h = *th.high;
            const double rho = utilizations(params).rho_a;
            const std::int64_t m = th.a_equilibrium.value;
            const double base = gamma_sum(rho, m);
            const double s = geometric_sum(rho, m + 1);
            const double at = base + static_cast<double>(h.v) * s;
            doc["v"] = {{"value", h.v}, {"real_root", h.real_root}, {"bracket", {at, at + s}}};
            doc["t"] = {{"value", h.t}, {"real_root", static_cast<double>(m) + h.real_root}};
            doc["b_join"] = {{"value", th.b_join}, {"real_root", static_cast<double>(m) + h.real_root - 1.0}, {"bracket", {at, at + s}}};
        }
        doc["b_stay"] = th.b_stay;
        try
        {
            const BPlannerScan scan = b_planner_scan(params);
            doc["b_planner"] = {{"value", scan.threshold},
                                {"coincides_with_global", scan.coincides_with_global},
                                {"single_crossing", scan.single_crossing},
                                {"values", scan.values}};
        }
        catch (const Error& e)
        {
            doc["b_planner"] = error_object(e);
        }
    }
    const GlobalPlan plan = global_thresholds(params);
    doc["global_plan"] = {{"favored_class", std::string(to_string(plan.favored_class))},
                          {"favored_threshold", bracket_json(plan.favored_threshold)},
                          {"total_threshold", bracket_json(plan.total_threshold)},
                          {"eviction_rule", plan.eviction_rule}};
    return doc;
}

RunResult run_invocation(const Invocation& inv)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    if (inv.command == "thresholds")
    {
        r = run_thresholds(inv);
    }
    else if (inv.command == "verify")
    {
        r = run_verify(inv);
    }
    else if (inv.command == "simulate")
    {
        r = run_simulate(inv);
    }
    else if (inv.command == "compare")
    {
        r = run_compare(inv);
    }
    else if (inv.command == "sweep")
    {
        r = run_sweep(inv);
    }
    else
    {
        throw Error(ErrorKind::ConfigError, "unknown command '" + inv.command + "'", inv.command);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::string> names;
    for (const auto& f : r.files)
    {
        names.push_back(f.name);
    }
    const json m = manifest(inv, names);
    for (auto& f : r.files)
    {
        if (f.name.ends_with(".csv"))
        {
            f.content = csv_header_line(m) + f.content;
        }
        else
        {
            json body = json::parse(f.content);
            json doc = {{"manifest", with_runtime(m, seconds)}};
            doc.update(body);
            f.content = doc.dump(2) + "\n";
        }
    }
    return r;
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
    {
        throw Error(ErrorKind::ConfigError, "cannot create output directory '" + dir + "': " + ec.message(), dir);
    }
    std::vector<std::pair<fs::path, fs::path>> staged;
    try
    {
        for (const auto& f : files)
        {
            const fs::path final_path = fs::path(dir) / f.name;
            fs::path tmp = final_path;
            tmp += ".tmp";
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << f.content;
            out.close();
            staged.emplace_back(tmp, final_path);
            if (!out)
            {
                throw Error(ErrorKind::ConfigError, "cannot write '" + tmp.string() + "'", tmp.string());
            }
        }
    }
    catch (...)
    {
        for (const auto& [tmp, final_path] : staged)
        {
            fs::remove(tmp, ec);
        }
        throw;
    }
    for (const auto& [tmp, final_path] : staged)
    {
        fs::rename(tmp, final_path);
    }
}

json read_manifest(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw Error(ErrorKind::ConfigError, "cannot read '" + path + "'", path);
    }
    std::string first;
    std::getline(in, first);
    const std::string tag = "# manifest: ";
    try
    {
        if (first.rfind(tag, 0) == 0)
        {
            return json::parse(first.substr(tag.size()));
        }
        in.clear();
        in.seekg(0);
        const json doc = json::parse(in);
        return doc.at("manifest");
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorKind::ConfigError, "no manifest in '" + path + "': " + e.what(), path);
    }
}

json error_object(const std::exception& e)
{
    if (const auto* se = dynamic_cast<const Error*>(&e))
    {
        return {{"error", {{"kind", std::string(to_string(se->kind()))}, {"message", se->what()}, {"detail", se->detail()}}}};
    }
    return {{"error", {{"kind", "Internal"}, {"message", e.what()}, {"detail", ""}}}};
}

}  // namespace stratq::cli
