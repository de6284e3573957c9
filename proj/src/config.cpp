#include "chslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chslab::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.';
  });
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool looks_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-'))
    s.remove_prefix(1);
  return all_digits(s);
}

std::optional<double> parse_float(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string buf(s);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string unquote(std::string_view s, int line) {
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\') {
      if (i + 2 >= s.size())
        throw ConfigError("line " + std::to_string(line) +
                          ": dangling escape in string");
      ++i;
      switch (s[i]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default:
          throw ConfigError("line " + std::to_string(line) +
                            ": unsupported escape in string");
      }
    } else {
      out += s[i];
    }
  }
  return out;
}

ConfigValue parse_value(std::string_view raw, int line) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return unquote(raw, line);
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (looks_integer(raw)) {
    errno = 0;
    const long long v = std::strtoll(std::string(raw).c_str(), nullptr, 10);
    if (errno == ERANGE)
      throw ConfigError("line " + std::to_string(line) +
                        ": integer out of range");
    return static_cast<std::int64_t>(v);
  }
  if (const auto f = parse_float(raw)) return *f;
  throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" +
                    std::string(raw) + "' (strings need double quotes)");
}

// Strips a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  ConfigMap& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten_json(value, full, out);
    } else if (value.is_boolean()) {
      out[full] = value.get<bool>();
    } else if (value.is_number_integer()) {
      out[full] = value.get<std::int64_t>();
    } else if (value.is_number_unsigned()) {
      out[full] = static_cast<std::int64_t>(value.get<std::uint64_t>());
    } else if (value.is_number_float()) {
      out[full] = value.get<double>();
    } else if (value.is_string()) {
      out[full] = value.get<std::string>();
    } else {
      throw ConfigError("config key '" + full +
                        "' has unsupported JSON type");
    }
  }
}

template <class T>
const T* lookup(const ConfigMap& map, const std::string& key,
                std::string_view want) {
  const auto it = map.find(key);
  if (it == map.end()) return nullptr;
  if (const T* v = std::get_if<T>(&it->second)) return v;
  throw ConfigError("config key '" + key + "' has type " +
                    type_name(it->second) + ", expected " + std::string(want));
}

}  // namespace

ConfigMap parse_toml(std::string_view text) {
  ConfigMap out;
  std::string prefix;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name))
        throw ConfigError("line " + std::to_string(line_no) +
                          ": bad section name");
      prefix = std::string(name) + ".";
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("line " + std::to_string(line_no) + ": bad key '" +
                        std::string(key) + "'");
    const std::string full = prefix + std::string(key);
    if (out.count(full))
      throw ConfigError("line " + std::to_string(line_no) +
                        ": duplicate key '" + full + "'");
    out[full] = parse_value(value, line_no);
  }
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  LoadedConfig loaded;
  const bool json = path.size() >= 5 &&
                    path.compare(path.size() - 5, 5, ".json") == 0;
  if (!json) {
    loaded.values = parse_toml(text);
    return loaded;
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object())
    throw ConfigError("config file '" + path + "' is not a JSON object");

  if (j.contains("experiment") && j.contains("config") &&
      j["config"].is_object()) {
    // Run manifest: replay its resolved config and seed.
    flatten_json(j["config"], "", loaded.values);
    if (j["experiment"].is_string())
      loaded.experiment = j["experiment"].get<std::string>();
    if (j.contains("seed") && j["seed"].is_number())
      loaded.seed = j["seed"].get<std::uint64_t>();
  } else {
    flatten_json(j, "", loaded.values);
  }
  return loaded;
}

void apply_override(ConfigMap& map, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) +
                      "' is not of the form key=value");
  const std::string_view key = trim(assignment.substr(0, eq));
  const std::string_view raw = trim(assignment.substr(eq + 1));
  if (!valid_key(key))
    throw ConfigError("override has bad key '" + std::string(key) + "'");

  ConfigValue value;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    value = std::string(raw.substr(1, raw.size() - 2));
  } else if (raw == "true" || raw == "false") {
    value = (raw == "true");
  } else if (looks_integer(raw)) {
    value = static_cast<std::int64_t>(
        std::strtoll(std::string(raw).c_str(), nullptr, 10));
  } else if (const auto f = parse_float(raw)) {
    value = *f;
  } else {
    value = std::string(raw);
  }
  map[std::string(key)] = std::move(value);
}

std::string type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "bool";
    case 1: return "integer";
    case 2: return "float";
    default: return "string";
  }
}

bool get_bool(const ConfigMap& map, const std::string& key, bool fallback) {
  const bool* v = lookup<bool>(map, key, "bool");
  return v ? *v : fallback;
}

std::int64_t get_int(const ConfigMap& map, const std::string& key,
                     std::int64_t fallback) {
  const std::int64_t* v = lookup<std::int64_t>(map, key, "integer");
  return v ? *v : fallback;
}

double get_double(const ConfigMap& map, const std::string& key,
                  double fallback) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  if (const double* d = std::get_if<double>(&it->second)) return *d;
  if (const std::int64_t* i = std::get_if<std::int64_t>(&it->second))
    return static_cast<double>(*i);
  throw ConfigError("config key '" + key + "' has type " +
                    type_name(it->second) + ", expected float");
}

std::string get_string(const ConfigMap& map, const std::string& key,
                       const std::string& fallback) {
  const std::string* v = lookup<std::string>(map, key, "string");
  return v ? *v : fallback;
}

void require_known(const ConfigMap& map,
                   std::span<const std::string_view> allowed) {
  for (const auto& [key, value] : map) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end())
      continue;
    std::string msg = "unknown config key '" + key + "'; known keys:";
    for (const auto& k : allowed) msg += " " + std::string(k);
    throw ConfigError(msg);
  }
}

}  // namespace chslab::config
