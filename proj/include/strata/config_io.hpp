#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "strata/config.hpp"

namespace strata {

/// Every PlannerConfig field as a flat key (`robot.base_length`,
/// `costs.step_effort`, `level1_window`, ...), in file order.
std::vector<std::string> config_keys();

/// Sets one field from its text form. `weights` is a comma-separated list.
/// Throws ContractError for unknown keys or malformed values.
void set_config_value(PlannerConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const PlannerConfig& cfg, const std::string& key);

/// `key = value` text with every field; round-trips through load_config.
std::string format_config(const PlannerConfig& cfg);

/// Starts from the defaults and applies the file's keys, then validates.
PlannerConfig load_config(const std::filesystem::path& path);
PlannerConfig parse_config(const std::string& text);

}  // namespace strata
