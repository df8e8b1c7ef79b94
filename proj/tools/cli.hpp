#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratq/model.hpp"
#include "stratq/simulate.hpp"
#include "stratq/verify.hpp"

namespace stratq::cli
{

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

// Config file: the seven parameter keys plus an optional "sim" object.
struct ConfigFile
{
    RawParams raw;
    std::optional<SimConfig> sim;
};

ConfigFile parse_config(const json& doc);
ConfigFile load_config(const std::string& path);
json params_to_json(const RawParams& raw);
json sim_to_json(const SimConfig& sim);
SimConfig sim_from_json(const json& doc);

SimConfig default_sim_config();

struct SweepSpec
{
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    double step = 1.0;
    bool welfare = false;

    std::vector<double> points() const;
};

// Parses "0..2" and a step into a sweep over one parameter key.
SweepSpec parse_sweep(const std::string& parameter, const std::string& range, double step);

// Everything needed to reproduce a run; serialized into every output.
struct Invocation
{
    std::string command;
    bool has_params = true;  // verify may run without a config
    RawParams raw;
    SimConfig sim;
    Grid grid = Grid::Full;
    std::string policy = "equilibrium";
    std::optional<SweepSpec> sweep;
    std::vector<std::string> faults;
};

json manifest(const Invocation& inv, const std::vector<std::string>& outputs);
Invocation invocation_from_manifest(const json& m);

struct OutputFile
{
    std::string name;
    std::string content;
};

struct RunResult
{
    int exit_code = 0;
    std::vector<OutputFile> files;
    std::string stdout_text;
};

// Pure command runners; nothing touches the filesystem.
json thresholds_document(const ModelParams& params);
RunResult run_invocation(const Invocation& inv);

// Writes every file to a temporary name first, then renames them all.
void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

// Reads the manifest embedded in a JSON or CSV output file.
json read_manifest(const std::string& path);

json error_object(const std::exception& e);

std::string format_double(double x);

}  // namespace stratq::cli
