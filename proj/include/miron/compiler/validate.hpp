#pragma once

#include "miron/engine/params.hpp"
#include "miron/model/behavior_model.hpp"

#include <string>
#include <vector>

namespace miron::compiler {

struct Diagnostic {
  enum class Severity { error, warning };

  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::string rule;  // label of the rule concerned, if any
  int line = 0;

  bool is_error() const { return severity == Severity::error; }
  bool operator==(const Diagnostic&) const = default;
};

/// Static checks. Errors: reset-state tests, rules without branches, empty branches,
/// branch arity above the engine bound, unknown Mirons, direction mismatches and
/// self-inhibition. Warnings: unreachable rules, fan-out to no satisfiable successor,
/// implicitly declared variables and states.
std::vector<Diagnostic> validate_model(const model::BehaviorModel& m, const engine::EngineParams& p = {});

bool has_errors(const std::vector<Diagnostic>& diagnostics);
std::string to_string(const Diagnostic& d);

}  // namespace miron::compiler
