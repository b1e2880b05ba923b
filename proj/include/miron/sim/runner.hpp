#pragma once

#include "miron/runtime/config.hpp"
#include "miron/runtime/registry.hpp"
#include "miron/runtime/session.hpp"
#include "miron/sim/scenario.hpp"

#include <json.hpp>

#include <memory>

namespace miron::sim {

struct Check {
  std::string kind;  // expect | mirror | assert | engine
  int line = 0;
  bool pass = false;
  std::string description;
  nlohmann::json detail;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<runtime::TranscriptRecord> transcript;

  bool passed() const;
  std::size_t failures() const;
  /// Header line, one line per check, the transcript, and a summary line.
  std::string to_jsonl() const;
};

Report run_scenario(const Scenario& sc, std::shared_ptr<const runtime::RuntimeModel> model,
                    runtime::InternalActionRegistry registry, runtime::SessionOptions options);

/// Builds the built-in registry from `base` with the scenario's clock and kv file, and
/// seeds the session with the scenario seed.
Report run_scenario(const Scenario& sc, std::shared_ptr<const runtime::RuntimeModel> model,
                    runtime::RuntimeConfig base = {});

}  // namespace miron::sim
