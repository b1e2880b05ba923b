#pragma once

#include "miron/engine/weights.hpp"
#include "miron/model/behavior_model.hpp"

#include <stdexcept>

namespace miron::compiler {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArityOverflow : public CompileError {
 public:
  using CompileError::CompileError;
};

struct Lowered {
  engine::WeightSet weights;
  engine::Dictionary dictionary;
};

/// Lowers to one AND cell per (rule, branch), 1/n weights over the n inputs of a branch,
/// +1 OR entries for own branches and −1 entries for branches of inhibiting rules, and a
/// unit fan-out per distinct action. Condition and action names are sorted within their
/// segment; every variable gets four lines and every state two.
Lowered lower_model(const model::BehaviorModel& m, const engine::EngineParams& p = {});

}  // namespace miron::compiler
