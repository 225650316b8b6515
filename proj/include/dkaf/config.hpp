#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "dkaf/harness.hpp"

namespace dkaf {

using Json = nlohmann::json;

/// Strict conversion: unknown keys and wrong types raise ConfigError naming
/// the dotted key. Missing keys keep their defaults. A sidecar document
/// (with a top-level "config" member) is accepted as well.
ExperimentConfig config_from_json(const Json& doc);
Json to_json(const ExperimentConfig& config);

/// Reads a JSON document; ConfigError keyed by the path when unreadable.
Json load_json_file(const std::filesystem::path& path);

/// Applies "dotted.key=value". The value is parsed as JSON when possible and
/// taken as a string otherwise.
void apply_override(Json& tree, std::string_view assignment);

}  // namespace dkaf
