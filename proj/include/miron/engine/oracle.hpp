#pragma once

#include "miron/model/behavior_model.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace miron::engine {

/// Reference interpreter over the un-lowered model, used to check the matrix engine.
struct BranchRef {
  int rule_id = 0;
  std::size_t branch = 0;
  bool operator==(const BranchRef&) const = default;
};

/// Picks one of `candidates` (never empty) as the successor of `predecessor_id`.
using TieChooser = std::function<std::size_t(int predecessor_id, const std::vector<BranchRef>& candidates)>;

struct OracleResult {
  std::set<int> active;
  std::set<std::string> actions;  // canonical action names
};

/// `facts` are the canonical names of the condition lines that are high this step.
OracleResult oracle_step(const model::BehaviorModel& model, const std::set<std::string>& facts,
                         const std::set<int>& active, const TieChooser& choose);

}  // namespace miron::engine
