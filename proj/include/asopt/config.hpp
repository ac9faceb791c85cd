#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "asopt/debp.hpp"
#include "asopt/dpng.hpp"
#include "asopt/epmc.hpp"
#include "asopt/sitgan.hpp"

namespace asopt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every accepted key with its default value. Objects nest; any key not
// present here is rejected.
const nlohmann::json& default_config();

// Recursively overlays `user` onto `base`. Unknown keys and type mismatches
// throw ConfigError naming the dotted key path. Arrays replace wholesale.
nlohmann::json merge_config(const nlohmann::json& base, const nlohmann::json& user);

// Applies one "dotted.key=value" assignment. The value is parsed as JSON
// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& cfg, const std::string& assignment);

// defaults <- file <- overrides, in that order.
nlohmann::json load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

DeConfig de_config(const nlohmann::json& section);
GdConfig gd_config(const nlohmann::json& section);
EpmcConfig epmc_config(const nlohmann::json& section);
DpngConfig dpng_config(const nlohmann::json& epmc_section, const nlohmann::json& dpng_section);
GanConfig gan_config(const nlohmann::json& section);

} // namespace asopt
