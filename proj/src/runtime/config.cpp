#include "miron/runtime/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace miron::runtime {

RuntimeConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path.string() + ": expected an object");

  RuntimeConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "max_iterations") c.max_iterations = value.get<std::size_t>();
      else if (key == "expansion_cap") c.expansion_cap = value.get<std::size_t>();
      else if (key == "kv_file") {
        std::filesystem::path p = value.get<std::string>();
        c.kv_file = p.is_relative() ? path.parent_path() / p : p;
      } else if (key == "clock") c.clock = value.get<std::string>();
      else if (key == "idle_timeout_minutes") c.idle_timeout_minutes = value.get<double>();
      else throw ConfigError("config " + path.string() + ": unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (c.max_iterations == 0) throw ConfigError("config " + path.string() + ": max_iterations must be positive");
  return c;
}

RuntimeConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return load_config(*explicit_path);
  if (const char* env = std::getenv("MIRON_CONFIG"); env && *env) return load_config(env);
  return {};
}

}  // namespace miron::runtime
