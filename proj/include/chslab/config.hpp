#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace chslab::config {

using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;

// std::map so iteration order (and everything serialized from it) is the key
// order, independent of insertion history.
using ConfigMap = std::map<std::string, ConfigValue>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat TOML subset: comments, [section] headers (flattened to dotted key
// prefixes), and key = value lines with string/bool/integer/float values.
// Duplicate keys and bare unquoted words are errors.
ConfigMap parse_toml(std::string_view text);

struct LoadedConfig {
  ConfigMap values;
  std::optional<std::uint64_t> seed;     // manifest top-level seed
  std::optional<std::string> experiment; // manifest experiment name
};

// .toml parses as above; .json flattens nested objects into dotted keys. A
// JSON file shaped like a run manifest (top-level "experiment" and "config")
// contributes its config subobject plus the recorded seed, so a manifest can
// be replayed directly.
LoadedConfig load_config_file(const std::string& path);

// "key=value" with inferred type: bool literal, integer, float, else string
// (surrounding quotes stripped).
void apply_override(ConfigMap& map, std::string_view assignment);

std::string type_name(const ConfigValue& v);

bool get_bool(const ConfigMap& map, const std::string& key, bool fallback);
std::int64_t get_int(const ConfigMap& map, const std::string& key,
                     std::int64_t fallback);
// Integer values promote to double here.
double get_double(const ConfigMap& map, const std::string& key,
                  double fallback);
std::string get_string(const ConfigMap& map, const std::string& key,
                       const std::string& fallback);

// Rejects keys outside the allowed set; typos in overrides fail loudly
// instead of silently running the defaults.
void require_known(const ConfigMap& map,
                   std::span<const std::string_view> allowed);

}  // namespace chslab::config
