#pragma once

#include "dirand/devices.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Experiment driver behind the `dirand` executable. Commands are pure: they
// take a config document and return file contents, so the binary only does
// argument parsing and file writes.
namespace dirand::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRejected = 2;

struct ExperimentConfig {
    std::string subcommand;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;  // per-command default when absent
    unsigned threads = 1;
    std::string format = "json";
    std::string out;
    devices::StrategySpec strategy;
    nlohmann::ordered_json protocol = nlohmann::ordered_json::object();
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    // The merged document this config was parsed from; echoed in outputs.
    nlohmann::ordered_json echo = nlohmann::ordered_json::object();

    // Throws std::invalid_argument when no master seed was given.
    std::uint64_t master_seed() const;
    std::uint64_t trials_or(std::uint64_t fallback) const { return trials.value_or(fallback); }
};

// Throws std::invalid_argument on malformed documents.
ExperimentConfig config_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json load_json_file(const std::string& path);

struct OutputFile {
    std::string name;
    std::string content;
};

struct CommandOutput {
    int exit_code = kExitOk;
    std::vector<OutputFile> files;
    // Printed when no output directory is given.
    std::string primary;
};

// Dispatches on config.subcommand: chsh-stats, run, guess, entropy, design,
// extract, verify. Throws on validation errors.
CommandOutput run_command(const ExperimentConfig& config);

std::vector<std::string> subcommand_names();

// Creates `dir` if needed and writes every file; throws std::runtime_error.
void write_outputs(const CommandOutput& output, const std::string& dir);

} // namespace dirand::cli
