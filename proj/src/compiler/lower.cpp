#include "miron/compiler/lower.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace miron::compiler {

namespace {

using model::ActionSegment;
using model::ConditionSegment;

constexpr ConditionSegment kConditionOrder[] = {ConditionSegment::miron_intent, ConditionSegment::named_entity,
                                                ConditionSegment::action_feedback, ConditionSegment::working_memory};
constexpr ActionSegment kActionOrder[] = {ActionSegment::inner_miron, ActionSegment::outer_miron,
                                          ActionSegment::internal_action, ActionSegment::wm_change};

}  // namespace

Lowered lower_model(const model::BehaviorModel& m, const engine::EngineParams& p) {
  std::map<ConditionSegment, std::set<std::string>> conditions;
  std::map<ActionSegment, std::set<std::string>> actions;

  auto add_variable = [&](const std::string& v) {
    for (auto s : {model::VarState::filled, model::VarState::empty, model::VarState::changed, model::VarState::unchanged}) {
      conditions[ConditionSegment::named_entity].insert(model::to_string(model::ConditionAtom{model::VariableState{v, s}}));
    }
  };
  auto add_state = [&](const std::string& s) {
    for (auto l : {model::WmLevel::activated, model::WmLevel::inhibited}) {
      conditions[ConditionSegment::working_memory].insert(model::to_string(model::ConditionAtom{model::InternalState{s, l}}));
    }
  };
  for (const auto& v : m.declared_variables) add_variable(v);
  for (const auto& s : m.declared_states) add_state(s);

  std::map<int, std::size_t> rule_pos;
  for (std::size_t i = 0; i < m.rules.size(); ++i) rule_pos[m.rules[i].id] = i;

  for (const auto& rule : m.rules) {
    for (const auto& b : rule.branches) {
      if (b.arity() == 0) throw CompileError("rule '" + rule.label + "' has an empty branch");
      if (b.arity() > p.max_arity()) {
        throw ArityOverflow("rule '" + rule.label + "': branch arity " + std::to_string(b.arity()) + " exceeds " +
                            std::to_string(p.max_arity()));
      }
      for (const auto& atom : b.atoms) {
        if (const auto* st = std::get_if<model::InternalState>(&atom)) {
          if (st->level == model::WmLevel::reset) {
            throw CompileError("rule '" + rule.label + "' tests the untestable reset state of '" + st->name + "'");
          }
          add_state(st->name);
        } else if (const auto* var = std::get_if<model::VariableState>(&atom)) {
          add_variable(var->name);
        } else {
          conditions[model::segment_of(atom)].insert(model::to_string(atom));
        }
      }
      for (int pred : b.from_rules) {
        if (!rule_pos.count(pred)) throw CompileError("rule '" + rule.label + "' chains from unknown rule id " + std::to_string(pred));
      }
    }
    for (int target : rule.inhibits) {
      if (!rule_pos.count(target)) throw CompileError("rule '" + rule.label + "' inhibits unknown rule id " + std::to_string(target));
      if (target == rule.id) throw CompileError("rule '" + rule.label + "' inhibits itself");
    }
    for (const auto& a : rule.actions) {
      if (const auto* set = std::get_if<model::SetState>(&a)) add_state(set->name);
      actions[model::segment_of(a)].insert(model::to_string(a));
    }
  }

  Lowered out;
  auto& dict = out.dictionary;
  for (auto seg : kConditionOrder) {
    for (const auto& name : conditions[seg]) {
      dict.conditions.push_back(name);
      dict.condition_segments.push_back(seg);
    }
  }
  for (auto seg : kActionOrder) {
    for (const auto& name : actions[seg]) {
      dict.actions.push_back(name);
      dict.action_segments.push_back(seg);
    }
  }

  dict.reindex();

  std::vector<engine::SparseMatrix::Entry> cond, rule_w, or_w, act;
  std::uint32_t k = 0;
  std::vector<std::vector<std::uint32_t>> cells(m.rules.size());
  for (std::uint32_t mi = 0; mi < m.rules.size(); ++mi) {
    const auto& rule = m.rules[mi];
    for (const auto& b : rule.branches) {
      const auto w = engine::Rational::reciprocal(static_cast<std::int64_t>(b.arity()));
      for (const auto& atom : b.atoms) {
        cond.push_back({k, *dict.condition_index(model::to_string(atom)), w});
      }
      for (int pred : b.from_rules) rule_w.push_back({k, static_cast<std::uint32_t>(rule_pos[pred]), w});
      or_w.push_back({mi, k, {1, 1}});
      cells[mi].push_back(k);
      ++k;
    }
  }
  for (std::uint32_t mi = 0; mi < m.rules.size(); ++mi) {
    const auto& rule = m.rules[mi];
    for (int target : rule.inhibits) {
      for (std::uint32_t cell : cells[mi]) or_w.push_back({static_cast<std::uint32_t>(rule_pos[target]), cell, {-1, 1}});
    }
    std::set<std::uint32_t> seen;
    for (const auto& a : rule.actions) {
      const auto q = *dict.action_index(model::to_string(a));
      if (seen.insert(q).second) act.push_back({q, mi, {1, 1}});
    }
    dict.rules.push_back({rule.id, rule.label, cells[mi], mi});
  }

  out.weights.w_cond = engine::SparseMatrix(k, dict.conditions.size(), std::move(cond));
  out.weights.w_rule = engine::SparseMatrix(k, m.rules.size(), std::move(rule_w));
  out.weights.w_or = engine::SparseMatrix(m.rules.size(), k, std::move(or_w));
  out.weights.w_act = engine::SparseMatrix(dict.actions.size(), m.rules.size(), std::move(act));
  dict.reindex();
  out.weights.validate();
  dict.check_against(out.weights);
  return out;
}

}  // namespace miron::compiler
