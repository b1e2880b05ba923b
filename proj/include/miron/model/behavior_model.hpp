#pragma once

#include "miron/core/definition.hpp"
#include "miron/core/expansion.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace miron::model {

using core::Direction;

/// Working-memory level: activated (true), inhibited (false), or reset (removed).
enum class WmLevel { activated, inhibited, reset };

enum class VarState { filled, empty, changed, unchanged };

// --- condition atoms -------------------------------------------------------

struct MironPerceived {
  std::string name;
  Direction channel = Direction::outer;
  bool operator==(const MironPerceived&) const = default;
};

/// Completion feedback of a produced Miron or an internal action.
struct MironCompleted {
  std::string name;
  bool operator==(const MironCompleted&) const = default;
};

/// Failure feedback: production without a complete utterance, unknown or failing handler.
struct ActionFailed {
  std::string name;
  bool operator==(const ActionFailed&) const = default;
};

struct VariableState {
  std::string name;
  VarState state = VarState::filled;
  bool operator==(const VariableState&) const = default;
};

struct InternalState {
  std::string name;
  WmLevel level = WmLevel::activated;
  bool operator==(const InternalState&) const = default;
};

using ConditionAtom = std::variant<MironPerceived, MironCompleted, ActionFailed, VariableState, InternalState>;

// --- action atoms ----------------------------------------------------------

struct ProduceMiron {
  std::string name;
  Direction channel = Direction::outer;
  core::ProductionCriterion criterion;
  bool operator==(const ProduceMiron&) const = default;
};

struct SetState {
  std::string name;
  WmLevel level = WmLevel::activated;
  bool operator==(const SetState&) const = default;
};

/// `value` is a string with `${variable}` references; nullopt clears the variable.
struct WriteVariable {
  std::string name;
  std::optional<std::string> value;
  bool operator==(const WriteVariable&) const = default;
};

struct CallArg {
  bool literal = false;
  std::string text;  // literal value or variable name
  bool operator==(const CallArg&) const = default;
};

struct InvokeInternal {
  std::string name;
  std::vector<CallArg> args;
  bool operator==(const InvokeInternal&) const = default;
};

using ActionAtom = std::variant<ProduceMiron, SetState, WriteVariable, InvokeInternal>;

// --- graph -----------------------------------------------------------------

struct Branch {
  std::vector<ConditionAtom> atoms;
  std::vector<int> from_rules;
  int line = 0;

  std::size_t arity() const { return atoms.size() + from_rules.size(); }
  bool operator==(const Branch& o) const { return atoms == o.atoms && from_rules == o.from_rules; }
};

struct RuleDecl {
  int id = 0;
  std::string label;
  std::vector<Branch> branches;
  std::vector<ActionAtom> actions;
  /// Rules that list this rule in one of their branches (derived).
  std::vector<int> successors;
  std::vector<int> inhibits;
  int line = 0;

  bool operator==(const RuleDecl& o) const {
    return id == o.id && label == o.label && branches == o.branches && actions == o.actions &&
           successors == o.successors && inhibits == o.inhibits;
  }
};

inline constexpr int kFirstRuleId = 100;

/// Reserved perceivable events raised by the runtime itself.
inline constexpr std::string_view kSessionStart = "_start";
inline constexpr std::string_view kNoMatch = "_nomatch";

struct BehaviorModel {
  std::vector<core::MironDefinition> mirons;
  std::vector<RuleDecl> rules;
  std::set<std::string> declared_variables;
  std::set<std::string> declared_states;

  const core::MironDefinition* find_miron(std::string_view name) const;
  const RuleDecl* find_rule(int id) const;
  const RuleDecl* find_rule(std::string_view label) const;

  /// Recomputes every rule's `successors` from the branches' `from_rules`.
  void link_successors();
};

// --- canonical text --------------------------------------------------------
// The canonical form doubles as the dictionary name of a condition line or action and
// parses back with parse_condition / parse_action.

std::string to_string(const ConditionAtom& atom);
std::string to_string(const ActionAtom& atom);
std::string_view to_string(WmLevel level);
std::string_view to_string(VarState state);

ConditionAtom parse_condition(std::string_view text);
ActionAtom parse_action(std::string_view text);

enum class ConditionSegment { miron_intent, named_entity, action_feedback, working_memory };
enum class ActionSegment { inner_miron, outer_miron, internal_action, wm_change };

ConditionSegment segment_of(const ConditionAtom& atom);
ActionSegment segment_of(const ActionAtom& atom);
std::string_view to_string(ConditionSegment s);
std::string_view to_string(ActionSegment s);

/// Substitutes `${name}` references using `lookup`; unknown names become empty.
template <typename Lookup>
std::string interpolate(std::string_view text, Lookup&& lookup) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
      const auto close = text.find('}', i + 2);
      if (close != std::string_view::npos) {
        out += lookup(std::string(text.substr(i + 2, close - i - 2)));
        i = close;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

std::vector<std::string> interpolated_names(std::string_view text);

}  // namespace miron::model
