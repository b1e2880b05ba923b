#include "miron/compiler/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace miron::compiler {

namespace {

using model::Direction;

bool reserved(const std::string& name) { return name == model::kSessionStart || name == model::kNoMatch; }

class Checker {
 public:
  Checker(const model::BehaviorModel& m, const engine::EngineParams& p) : m_(m), p_(p) {}

  std::vector<Diagnostic> run() {
    collect_productions();
    for (const auto& rule : m_.rules) check_rule(rule);
    check_reachability();
    check_implicit();
    return std::move(out_);
  }

 private:
  void error(std::string code, std::string msg, const model::RuleDecl* r, int line) {
    out_.push_back({Diagnostic::Severity::error, std::move(code), std::move(msg), r ? r->label : "", line});
  }
  void warning(std::string code, std::string msg, const model::RuleDecl* r, int line) {
    out_.push_back({Diagnostic::Severity::warning, std::move(code), std::move(msg), r ? r->label : "", line});
  }

  void collect_productions() {
    for (const auto& rule : m_.rules) {
      for (const auto& a : rule.actions) {
        if (const auto* say = std::get_if<model::ProduceMiron>(&a)) {
          (say->channel == Direction::inner ? inner_produced_ : outer_produced_).insert(say->name);
        } else if (const auto* call = std::get_if<model::InvokeInternal>(&a)) {
          called_.insert(call->name);
        } else if (const auto* set = std::get_if<model::SetState>(&a)) {
          states_used_.insert(set->name);
        } else if (const auto* write = std::get_if<model::WriteVariable>(&a)) {
          vars_used_.insert(write->name);
          if (write->value) {
            for (auto& n : model::interpolated_names(*write->value)) vars_used_.insert(n);
          }
        }
        if (const auto* call = std::get_if<model::InvokeInternal>(&a)) {
          for (const auto& arg : call->args) {
            if (!arg.literal) vars_used_.insert(arg.text);
          }
        }
      }
    }
  }

  void check_rule(const model::RuleDecl& rule) {
    if (rule.branches.empty()) error("no_branches", "rule '" + rule.label + "' has no condition branch", &rule, rule.line);
    if (std::find(rule.inhibits.begin(), rule.inhibits.end(), rule.id) != rule.inhibits.end()) {
      error("self_inhibition", "rule '" + rule.label + "' inhibits itself", &rule, rule.line);
    }
    for (int target : rule.inhibits) {
      if (!m_.find_rule(target)) error("unknown_rule", "inhibited rule id " + std::to_string(target) + " does not exist", &rule, rule.line);
    }
    for (const auto& b : rule.branches) {
      if (b.arity() == 0) error("empty_branch", "rule '" + rule.label + "' has an empty branch", &rule, b.line);
      if (b.arity() > p_.max_arity()) {
        error("arity_overflow",
              "branch arity " + std::to_string(b.arity()) + " exceeds " + std::to_string(p_.max_arity()), &rule, b.line);
      }
      for (int pred : b.from_rules) {
        if (!m_.find_rule(pred)) error("unknown_rule", "predecessor id " + std::to_string(pred) + " does not exist", &rule, b.line);
      }
      for (const auto& atom : b.atoms) check_condition(rule, b, atom);
    }
    for (const auto& a : rule.actions) {
      if (const auto* say = std::get_if<model::ProduceMiron>(&a)) {
        const auto* def = m_.find_miron(say->name);
        if (!def) {
          error("unknown_miron", "rule produces undeclared Miron '" + say->name + "'", &rule, rule.line);
        } else if (def->direction != say->channel) {
          error("direction_mismatch",
                "'" + model::to_string(a) + "' but '" + say->name + "' is an " + std::string(core::to_string(def->direction)) +
                    " Miron",
                &rule, rule.line);
        }
      }
    }
    if (rule.actions.empty()) warning("no_actions", "rule '" + rule.label + "' has no action", &rule, rule.line);
  }

  void check_condition(const model::RuleDecl& rule, const model::Branch& b, const model::ConditionAtom& atom) {
    if (const auto* st = std::get_if<model::InternalState>(&atom)) {
      states_used_.insert(st->name);
      if (st->level == model::WmLevel::reset) {
        error("reset_test", "'" + model::to_string(atom) + "': the reset state cannot be tested", &rule, b.line);
      }
    } else if (const auto* heard = std::get_if<model::MironPerceived>(&atom)) {
      const auto* def = m_.find_miron(heard->name);
      if (!def && !reserved(heard->name)) {
        error("unknown_miron", "condition on undeclared Miron '" + heard->name + "'", &rule, b.line);
      } else if (def && def->direction != heard->channel) {
        error("direction_mismatch",
              "'" + model::to_string(atom) + "' but '" + heard->name + "' is an " +
                  std::string(core::to_string(def->direction)) + " Miron",
              &rule, b.line);
      } else if (reserved(heard->name) && heard->channel != Direction::outer) {
        error("direction_mismatch", "'" + heard->name + "' is only perceived on the outer channel", &rule, b.line);
      }
    } else if (const auto* var = std::get_if<model::VariableState>(&atom)) {
      vars_used_.insert(var->name);
    } else {
      const std::string& name = std::visit(
          [](const auto& a) -> const std::string& { return a.name; }, atom);
      if (!m_.find_miron(name) && !called_.count(name)) {
        error("unknown_reference", "'" + model::to_string(atom) + "' names neither a Miron nor a called action", &rule,
              b.line);
      }
    }
  }

  // An atom can become true only if something in the model or the outside world raises it.
  bool atom_possible(const model::ConditionAtom& atom) const {
    if (const auto* heard = std::get_if<model::MironPerceived>(&atom)) {
      if (heard->channel == Direction::inner) return inner_produced_.count(heard->name) > 0;
      return true;
    }
    if (const auto* done = std::get_if<model::MironCompleted>(&atom)) {
      return inner_produced_.count(done->name) || outer_produced_.count(done->name) || called_.count(done->name);
    }
    if (const auto* failed = std::get_if<model::ActionFailed>(&atom)) {
      return inner_produced_.count(failed->name) || outer_produced_.count(failed->name) || called_.count(failed->name);
    }
    if (const auto* st = std::get_if<model::InternalState>(&atom)) {
      return st->level != model::WmLevel::reset && states_used_.count(st->name) > 0 && state_settable(*st);
    }
    return true;
  }

  bool state_settable(const model::InternalState& st) const {
    for (const auto& rule : m_.rules) {
      for (const auto& a : rule.actions) {
        if (const auto* set = std::get_if<model::SetState>(&a)) {
          if (set->name == st.name && set->level == st.level) return true;
        }
      }
    }
    return false;
  }

  void check_reachability() {
    std::set<int> reachable;
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& rule : m_.rules) {
        if (reachable.count(rule.id)) continue;
        for (const auto& b : rule.branches) {
          if (b.arity() == 0) continue;
          const bool atoms_ok = std::all_of(b.atoms.begin(), b.atoms.end(), [&](const auto& a) { return atom_possible(a); });
          const bool preds_ok = std::all_of(b.from_rules.begin(), b.from_rules.end(), [&](int p) { return reachable.count(p) > 0; });
          if (atoms_ok && preds_ok) {
            reachable.insert(rule.id);
            grew = true;
            break;
          }
        }
      }
    }
    for (const auto& rule : m_.rules) {
      if (!reachable.count(rule.id) && !rule.branches.empty()) {
        warning("unreachable_rule", "no branch of rule '" + rule.label + "' can ever fire", &rule, rule.line);
      }
    }
    for (const auto& rule : m_.rules) {
      if (rule.successors.empty() || !reachable.count(rule.id)) continue;
      const bool any = std::any_of(rule.successors.begin(), rule.successors.end(), [&](int s) { return reachable.count(s) > 0; });
      if (!any) {
        warning("unsatisfiable_fanout", "rule '" + rule.label + "' chains only to rules that can never fire", &rule,
                rule.line);
      }
    }
  }

  void check_implicit() {
    for (const auto& v : vars_used_) {
      if (!m_.declared_variables.count(v)) warning("implicit_variable", "variable '" + v + "' is not declared", nullptr, 0);
    }
    for (const auto& s : states_used_) {
      if (!m_.declared_states.count(s)) warning("implicit_state", "state '" + s + "' is not declared", nullptr, 0);
    }
  }

  const model::BehaviorModel& m_;
  const engine::EngineParams& p_;
  std::vector<Diagnostic> out_;
  std::set<std::string> inner_produced_, outer_produced_, called_, states_used_, vars_used_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const model::BehaviorModel& m, const engine::EngineParams& p) {
  return Checker(m, p).run();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
}

std::string to_string(const Diagnostic& d) {
  std::string s = d.is_error() ? "error" : "warning";
  if (d.line > 0) s += " (line " + std::to_string(d.line) + ")";
  s += " [" + d.code + "] " + d.message;
  return s;
}

}  // namespace miron::compiler
