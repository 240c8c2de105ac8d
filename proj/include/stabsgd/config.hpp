#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stabsgd/baselines.hpp"
#include "stabsgd/trainer.hpp"

namespace stabsgd {

/// Flat key=value settings. Lines starting with '#' are comments. A key
/// may carry an algorithm prefix ("truncated.eta") to apply to that
/// algorithm only.
using Settings = std::map<std::string, std::string>;

Settings parse_settings(std::istream& in);
Settings load_settings(const std::string& path);
/// Parses "key=value"; throws std::invalid_argument when malformed.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

/// Base keys overlaid with keys prefixed by `algo.`.
Settings settings_for(const Settings& all, std::string_view algo);

/// Keys (after prefix removal) that no algorithm understands.
std::vector<std::string> unknown_keys(const Settings& all);

/// Apply recognised keys; values that fail to parse throw
/// std::invalid_argument naming the key.
void apply_settings(TrainConfig& cfg, const Settings& s);
void apply_settings(BaselineConfig& cfg, const Settings& s);

}  // namespace stabsgd
