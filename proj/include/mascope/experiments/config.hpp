#pragma once

// Line-based `key = value` scenario config files. `#` starts a comment,
// blank lines are skipped. Keys: scenario, engine, seed, iters, step.kind,
// step.scale, network.kind, network.d, log.stride (a positive integer or
// "geometric").

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mascope/experiments/scenarios.hpp"

namespace mascope::experiments {

struct ConfigFile {
  std::optional<std::string> scenario;
  ScenarioParams params;
};

/// Throws ParameterError naming the line on unknown keys or bad values.
ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::filesystem::path& path);

}  // namespace mascope::experiments
