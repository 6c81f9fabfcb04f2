#pragma once

#include "simeval/clb.hpp"
#include "simeval/error.hpp"
#include "simeval/features.hpp"
#include "simeval/tissue.hpp"
#include "simeval/uss.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

// JSON mappings for every configuration type. Missing keys keep their defaults; unknown keys
// are rejected with ConfigError so that typos do not silently fall back to defaults.

namespace simeval::clb {
void to_json(nlohmann::json& j, const Layer& l);
void from_json(const nlohmann::json& j, Layer& l);
void to_json(nlohmann::json& j, const Config& c);
void from_json(const nlohmann::json& j, Config& c);
void to_json(nlohmann::json& j, const DegradeConfig& d);
void from_json(const nlohmann::json& j, DegradeConfig& d);
}  // namespace simeval::clb

namespace simeval::uss {
void to_json(nlohmann::json& j, const Config& c);
void from_json(const nlohmann::json& j, Config& c);
}  // namespace simeval::uss

namespace simeval::features {
void to_json(nlohmann::json& j, const Params& p);
void from_json(const nlohmann::json& j, Params& p);
}  // namespace simeval::features

namespace simeval::tissue {
void to_json(nlohmann::json& j, const TissueClass& c);
void from_json(const nlohmann::json& j, TissueClass& c);
void to_json(nlohmann::json& j, const Config& c);
void from_json(const nlohmann::json& j, Config& c);
}  // namespace simeval::tissue

namespace simeval {

/// Parses a JSON file; throws ConfigError when missing or malformed.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Converts JSON to T, mapping any nlohmann exception to ConfigError.
template <typename T>
T parse_config(const nlohmann::json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(what + ": " + ex.what());
  }
}

/// Names of the shipped presets in a category ("clb", "uss", "tissue", "eval", "degrade").
std::vector<std::string> preset_names(const std::string& category);

/// JSON text of a shipped preset; throws ConfigError for an unknown name.
nlohmann::json preset(const std::string& category, const std::string& name);

}  // namespace simeval
