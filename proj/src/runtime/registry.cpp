#include "miron/runtime/registry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <memory>

namespace miron::runtime {

void InternalActionRegistry::register_action(const std::string& name, Handler handler) {
  if (!handlers_.emplace(name, std::move(handler)).second) throw DuplicateRegistration(name);
}

const Handler* InternalActionRegistry::find(const std::string& name) const {
  const auto it = handlers_.find(name);
  return it == handlers_.end() ? nullptr : &it->second;
}

std::vector<std::string> InternalActionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : handlers_) out.push_back(name);
  return out;
}

std::string local_time_hhmm() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  localtime_r(&now, &tm);
  char buf[8];
  std::strftime(buf, sizeof buf, "%H:%M", &tm);
  return buf;
}

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::shared_ptr<const nlohmann::json> load_kv(const RuntimeConfig& config) {
  if (!config.kv_file) return std::make_shared<nlohmann::json>(nlohmann::json::object());
  std::ifstream in(*config.kv_file);
  if (!in) throw ConfigError("cannot read kv file " + config.kv_file->string());
  try {
    auto j = std::make_shared<nlohmann::json>(nlohmann::json::parse(in));
    if (!j->is_object()) throw ConfigError("kv file " + config.kv_file->string() + " must hold a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("kv file " + config.kv_file->string() + ": " + e.what());
  }
}

}  // namespace

InternalActionRegistry builtin_registry(const RuntimeConfig& config, TimeSource time) {
  InternalActionRegistry reg;
  if (!time) {
    if (config.clock) {
      time = [fixed = *config.clock] { return fixed; };
    } else {
      time = local_time_hhmm;
    }
  }
  reg.register_action("clock", [time](const HandlerCall&) {
    HandlerResult r;
    r.writes["currentTime"] = time();
    return r;
  });

  auto kv = load_kv(config);
  reg.register_action("kv_query", [kv](const HandlerCall& call) {
    const std::string key = lower(join(call.args, ":"));
    const auto it = kv->find(key);
    if (it == kv->end()) return HandlerResult::failure("no entry for '" + key + "'");
    HandlerResult r;
    if (it->is_object()) {
      for (const auto& [field, value] : it->items()) r.writes[field] = value.is_string() ? value.get<std::string>() : value.dump();
    } else {
      r.writes["kvResult"] = it->is_string() ? it->get<std::string>() : it->dump();
    }
    return r;
  });

  reg.register_action("send_message", [](const HandlerCall& call) {
    if (call.args.empty()) return HandlerResult::failure("empty message");
    HandlerResult r;
    r.outbound = join(call.args, " ");
    return r;
  });
  return reg;
}

}  // namespace miron::runtime
