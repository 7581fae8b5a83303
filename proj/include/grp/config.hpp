#pragma once

#include "grp/proposal.hpp"
#include "grp/synth.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace grp {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Flat "key = value" settings; '#' starts a comment line.
using Settings = std::map<std::string, std::string>;

/// Throws InvalidConfig on a line without '=', an empty key or a repeated key.
Settings parse_settings(const std::string& text, const std::string& source = "config");
Settings read_settings(const std::filesystem::path& path);

/// Keys understood by pipeline_config().
const std::vector<std::string>& pipeline_keys();

/// Environment variable consulted for `key`: GRP_ + upper-cased key with
/// '.' replaced by '_' (camera.fi -> GRP_CAMERA_FI).
std::string env_name(const std::string& key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Process environment lookup.
std::optional<std::string> getenv_lookup(const std::string& name);

/// Settings found in the environment for the pipeline keys.
Settings env_settings(const EnvLookup& lookup = getenv_lookup);

/// Merges `layer` over `base`. A layer that sets one of leaf / alpha drops
/// the other from `base`; setting both in one layer is InvalidConfig.
void overlay(Settings& base, const Settings& layer);

/// Defaults with `settings` applied. Unknown keys and unparsable values are
/// InvalidConfig. The result is validated.
PipelineConfig pipeline_config(const Settings& settings);

/// Inverse of pipeline_config for a complete settings listing.
Settings to_settings(const PipelineConfig& config);
std::string format_settings(const Settings& settings);

/// Scene description in the same flat format (name, table.*, spacing,
/// noise_sigma, seed, point_budget, motion, travel, travel_frames, min_gap,
/// min_clearance, background, camera.*, object.<n>.{shape,dimensions,
/// centroid,color,label}). Vectors and colors are comma separated.
SceneSpec scene_from_settings(const Settings& settings);
Settings scene_settings(const SceneSpec& spec);

} // namespace grp
