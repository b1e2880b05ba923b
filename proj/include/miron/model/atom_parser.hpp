#pragma once

#include "miron/model/behavior_model.hpp"
#include "miron/model/lexer.hpp"

namespace miron::model {

/// `after <rule>` inside a condition: a chaining link resolved once all rules are known.
struct RuleLink {
  std::string label;
  int line = 0;
};

struct ParsedCondition {
  std::variant<ConditionAtom, RuleLink> term;
  bool channel_defaulted = false;
};

struct ParsedAction {
  ActionAtom atom;
  bool channel_defaulted = false;
};

ParsedCondition parse_condition_term(TokenStream& in);
ParsedAction parse_action_term(TokenStream& in);

}  // namespace miron::model
