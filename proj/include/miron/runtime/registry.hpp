#pragma once

#include "miron/core/definition.hpp"
#include "miron/runtime/config.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace miron::runtime {

struct HandlerCall {
  std::string name;
  std::vector<std::string> args;   // resolved argument values
  const core::Bindings& entities;  // read view of the named-entity store
};

struct HandlerResult {
  core::Bindings writes;
  /// Set when the action did not succeed; the runtime raises `failed <name>`.
  std::optional<std::string> error;
  /// Message handed to the outside world, recorded in the transcript.
  std::optional<std::string> outbound;

  static HandlerResult failure(std::string why) {
    HandlerResult r;
    r.error = std::move(why);
    return r;
  }
};

using Handler = std::function<HandlerResult(const HandlerCall&)>;

class DuplicateRegistration : public std::logic_error {
 public:
  explicit DuplicateRegistration(const std::string& name) : std::logic_error("internal action '" + name + "' already registered") {}
};

class InternalActionRegistry {
 public:
  void register_action(const std::string& name, Handler handler);
  const Handler* find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Handler> handlers_;
};

using TimeSource = std::function<std::string()>;

/// Local wall-clock time as HH:MM.
std::string local_time_hhmm();

/// clock: writes currentTime. kv_query: looks up the lower-cased ':'-joined arguments in
/// the configured JSON map; an object value writes each field, a string writes kvResult.
/// send_message: records the space-joined arguments as an outbound message.
InternalActionRegistry builtin_registry(const RuntimeConfig& config, TimeSource time = nullptr);

}  // namespace miron::runtime
