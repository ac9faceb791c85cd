#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "asopt/dataset.hpp"

namespace asopt {

enum class Command { predict, cluster, generate, augment, analyze, bench };

std::string to_string(Command c);
Command parse_command(const std::string& s);

// Files written by a command, relative to its output directory.
struct CommandOutput {
    std::filesystem::path dir;
    std::vector<std::string> files;
};

// Loads the configured dataset: a CSV under the configured schema or one
// of the synthetic generators.
Dataset load_data(const nlohmann::json& cfg);

// Each command reads a fully resolved config (see load_config), writes its
// artifacts plus resolved_config.json into cfg["output"], and returns the
// list of files. Errors propagate as exceptions.
CommandOutput cmd_predict(const nlohmann::json& cfg);
CommandOutput cmd_cluster(const nlohmann::json& cfg);
CommandOutput cmd_generate(const nlohmann::json& cfg);
CommandOutput cmd_augment(const nlohmann::json& cfg);
CommandOutput cmd_analyze(const nlohmann::json& cfg);

// Dispatch for everything except bench, which lives with the acceptance
// suite.
CommandOutput run_command(Command c, const nlohmann::json& cfg);

// Seed of clustering run r under root seed `root`.
std::uint64_t run_seed(std::uint64_t root, std::size_t r);

} // namespace asopt
