#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "lmnne/trainer.h"

namespace lmnne::cli {

/// Keys accepted in a training config file, in canonical order.
inline constexpr std::string_view kConfigKeys[] = {
    "dim", "gamma", "alpha", "beta", "mu", "epsilon",
    "max_epochs", "seed", "pull_norm", "push_norm", "baseline"};

/// Sets one key. Unknown keys and unparseable values throw ConfigError
/// naming the key.
void set_config_value(TrainConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines ('#' starts a comment) on top of `base`.
/// Repeated keys are an error. The result is validated.
TrainConfig parse_train_config(std::istream& in, std::string_view source,
                               TrainConfig base = {});
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});

/// Canonical key/value rendering; parse_train_config reads it back exactly.
std::map<std::string, std::string> config_entries(const TrainConfig& config);
std::string format_train_config(const TrainConfig& config);

}  // namespace lmnne::cli
