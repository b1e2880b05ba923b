#include "miron/engine/oracle.hpp"

#include <algorithm>
#include <map>

namespace miron::engine {

OracleResult oracle_step(const model::BehaviorModel& model, const std::set<std::string>& facts,
                         const std::set<int>& active, const TieChooser& choose) {
  std::map<int, std::vector<bool>> satisfied;
  for (const auto& rule : model.rules) {
    auto& flags = satisfied[rule.id];
    for (const auto& branch : rule.branches) {
      bool ok = true;
      for (const auto& atom : branch.atoms) ok = ok && facts.count(model::to_string(atom)) > 0;
      for (int pred : branch.from_rules) ok = ok && active.count(pred) > 0;
      flags.push_back(ok);
    }
  }

  // Each active predecessor hands its turn to exactly one satisfied successor branch.
  std::set<std::pair<int, std::size_t>> chosen;
  for (int pred : active) {
    std::vector<BranchRef> candidates;
    for (const auto& rule : model.rules) {
      for (std::size_t b = 0; b < rule.branches.size(); ++b) {
        const auto& from = rule.branches[b].from_rules;
        if (satisfied[rule.id][b] && std::find(from.begin(), from.end(), pred) != from.end()) {
          candidates.push_back({rule.id, b});
        }
      }
    }
    if (!candidates.empty()) {
      const BranchRef pick = candidates.at(choose(pred, candidates));
      chosen.emplace(pick.rule_id, pick.branch);
    }
  }

  std::map<int, std::vector<bool>> fires;
  for (const auto& rule : model.rules) {
    for (std::size_t b = 0; b < rule.branches.size(); ++b) {
      const bool ok = satisfied[rule.id][b] &&
                      (rule.branches[b].from_rules.empty() || chosen.count({rule.id, b}) > 0);
      fires[rule.id].push_back(ok);
    }
  }
  auto any_fires = [&](int id) {
    for (bool v : fires[id]) {
      if (v) return true;
    }
    return false;
  };

  OracleResult out;
  for (const auto& rule : model.rules) {
    if (!any_fires(rule.id)) continue;
    bool inhibited = false;
    for (const auto& other : model.rules) {
      if (std::find(other.inhibits.begin(), other.inhibits.end(), rule.id) != other.inhibits.end() &&
          any_fires(other.id)) {
        inhibited = true;
      }
    }
    if (inhibited) continue;
    out.active.insert(rule.id);
    for (const auto& action : rule.actions) out.actions.insert(model::to_string(action));
  }
  return out;
}

}  // namespace miron::engine
