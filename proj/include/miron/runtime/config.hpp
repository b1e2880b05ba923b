#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace miron::runtime {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RuntimeConfig {
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;
  std::size_t expansion_cap = 10'000;
  /// JSON map consulted by kv_query; relative paths resolve against the config file.
  std::optional<std::filesystem::path> kv_file;
  /// Fixed "HH:MM" reported by the clock action instead of local time.
  std::optional<std::string> clock;
  double idle_timeout_minutes = 30.0;
};

/// Reads a JSON config file. Unknown keys are rejected.
RuntimeConfig load_config(const std::filesystem::path& path);

/// `explicit_path` if given, else $MIRON_CONFIG if set, else defaults.
RuntimeConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace miron::runtime
