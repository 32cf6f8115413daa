#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace intlab::cli {

struct RunConfig {
    std::string subcommand;
    std::map<std::string, std::string> params;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
};

struct ParamSpec {
    std::string name;
    bool required = false;
    std::string doc;
};

struct SubcommandSpec {
    std::string name;
    std::string doc;
    std::vector<ParamSpec> params;
};

const std::vector<SubcommandSpec>& subcommands();

// Parses `intlab <subcommand> [--key value ...]` or `intlab --config file.json`.
// Global keys: --out <dir>, --seed <n>.
RunConfig config_from_args(const std::vector<std::string>& args);
RunConfig config_from_json_file(const std::filesystem::path& path);

// Validates against the subcommand schema (unknown keys are rejected), runs
// the subcommand, writes its artifacts under out_dir, returns 0. Errors are
// reported by throwing; main_entry maps them to exit codes 2/3.
int dispatch(const RunConfig& config);

std::string usage();

// Full argv-to-exit-code wrapper including the JSON error report.
int main_entry(int argc, char** argv);

}  // namespace intlab::cli
