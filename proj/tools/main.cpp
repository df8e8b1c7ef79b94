#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "stratq/errors.hpp"

namespace
{

using stratq::cli::json;

int fail(const std::exception& e, int code)
{
    std::cerr << stratq::cli::error_object(e).dump() << "\n";
    return code;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void drop_timings(json& doc)
{
    if (doc.is_object())
    {
        doc.erase("runtime_seconds");
        doc.erase("seconds");
        for (auto& item : doc.items())
        {
            drop_timings(item.value());
        }
    }
    else if (doc.is_array())
    {
        for (auto& item : doc)
        {
            drop_timings(item);
        }
    }
}

// Content compared on replay; wall-clock fields are expected to differ.
std::string comparable(const std::string& name, const std::string& content)
{
    if (name.ends_with(".csv"))
    {
        return content;
    }
    json doc = json::parse(content);
    drop_timings(doc);
    return doc.dump();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Strategic two-class M/M/1 queues: thresholds, checks and simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    int reps = 0;
    std::int64_t events = 0;
    double horizon = 0.0;
    std::string out_dir;
    std::string grid = "full";
    unsigned threads = 0;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "base seed");
    app.add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
    auto* ev = app.add_option("--events", events, "events per replication")->check(CLI::PositiveNumber);
    app.add_option("--time", horizon, "simulated time per replication")->check(CLI::PositiveNumber)->excludes(ev);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--grid", grid, "check sizes")->check(CLI::IsMember({"small", "full"}));
    app.add_option("--threads", threads, "worker threads (0: all cores)");

    app.add_subcommand("thresholds", "all equilibrium and planner thresholds as JSON");
    auto* verify = app.add_subcommand("verify", "run the oracle and Monte Carlo checks");
    std::vector<std::string> faults;
    verify->add_option("--inject-fault", faults)->group("");
    auto* simulate = app.add_subcommand("simulate", "simulate one admission policy");
    std::string policy = "equilibrium";
    simulate->add_option("--policy", policy)->check(CLI::IsMember({"open", "equilibrium", "global", "class_planner"}));
    app.add_subcommand("compare", "welfare of equilibrium, global plan and class planners");
    auto* sweep = app.add_subcommand("sweep", "thresholds along one parameter, e.g. `sweep lambda_b 0..2 step 0.25`");
    std::string sweep_param, sweep_range;
    std::vector<std::string> sweep_rest;
    double sweep_step = 0.0;
    bool sweep_welfare = false;
    sweep->add_option("parameter", sweep_param)->required();
    sweep->add_option("range", sweep_range, "FROM..TO")->required();
    sweep->add_option("rest", sweep_rest, "step STEP");
    sweep->add_option("--step", sweep_step);
    sweep->add_flag("--welfare", sweep_welfare, "add simulated equilibrium welfare columns");
    auto* replay = app.add_subcommand("replay", "re-run an output file's manifest and compare results");
    std::string replay_file;
    replay->add_option("file", replay_file)->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        return fail(stratq::Error(stratq::ErrorKind::ConfigError, e.what()), 2);
    }

    try
    {
        if (replay->parsed())
        {
            namespace fs = std::filesystem;
            const json m = stratq::cli::read_manifest(replay_file);
            const auto result = stratq::cli::run_invocation(stratq::cli::invocation_from_manifest(m));
            const fs::path dir = fs::path(replay_file).parent_path();
            bool same = true;
            for (const auto& f : result.files)
            {
                const bool match = fs::exists(dir / f.name) && comparable(f.name, slurp(dir / f.name)) == comparable(f.name, f.content);
                std::cout << f.name << ": " << (match ? "identical" : "DIFFERENT") << "\n";
                same = same && match;
            }
            return same ? 0 : 1;
        }

        stratq::cli::Invocation inv;
        inv.command = app.get_subcommands().front()->get_name();
        const bool needs_config = inv.command != "verify";
        if (config_path.empty() && needs_config)
        {
            throw stratq::Error(stratq::ErrorKind::ConfigError, "--config is required", "config");
        }
        inv.sim = stratq::cli::default_sim_config();
        inv.has_params = false;
        if (!config_path.empty())
        {
            const auto cfg = stratq::cli::load_config(config_path);
            inv.raw = cfg.raw;
            inv.has_params = true;
            if (cfg.sim)
            {
                inv.sim = *cfg.sim;
            }
        }
        if (app.count("--seed")) inv.sim.seed = seed;
        if (app.count("--reps")) inv.sim.replications = reps;
        if (app.count("--events"))
        {
            inv.sim.max_events = events;
            inv.sim.max_time = 0.0;
        }
        if (app.count("--time"))
        {
            inv.sim.max_time = horizon;
            inv.sim.max_events = 0;
        }
        if (app.count("--threads")) inv.sim.threads = threads;
        inv.sim.validate();
        inv.grid = grid == "small" ? stratq::Grid::Small : stratq::Grid::Full;
        inv.policy = policy;
        inv.faults = faults;
        if (sweep->parsed())
        {
            double step = sweep_step;
            if (sweep_rest.size() == 2 && sweep_rest[0] == "step")
            {
                step = std::stod(sweep_rest[1]);
            }
            else if (!sweep_rest.empty() || sweep->count("--step") == 0)
            {
                throw stratq::Error(stratq::ErrorKind::ConfigError, "sweep needs `step STEP` or --step", sweep_range);
            }
            inv.sweep = stratq::cli::parse_sweep(sweep_param, sweep_range, step);
            inv.sweep->welfare = sweep_welfare;
        }

        const auto result = stratq::cli::run_invocation(inv);
        const bool file_command = inv.command != "thresholds" && inv.command != "verify";
        if (!out_dir.empty() || file_command)
        {
            const std::string dir = out_dir.empty() ? "." : out_dir;
            stratq::cli::write_outputs(dir, result.files);
            for (const auto& f : result.files)
            {
                std::cerr << "wrote " << (std::filesystem::path(dir) / f.name).string() << "\n";
            }
        }
        std::cout << result.stdout_text;
        return result.exit_code;
    }
    catch (const stratq::Error& e)
    {
        return fail(e, 2);
    }
    catch (const std::exception& e)
    {
        return fail(e, 2);
    }
}
