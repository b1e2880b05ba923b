#include "miron/model/behavior_model.hpp"

#include "miron/model/atom_parser.hpp"

#include <algorithm>

namespace miron::model {

namespace {

std::optional<Direction> accept_channel(TokenStream& in) {
  if (in.accept("inner")) return Direction::inner;
  if (in.accept("outer")) return Direction::outer;
  return std::nullopt;
}

WmLevel wm_level(TokenStream& in) {
  if (in.accept("true")) return WmLevel::activated;
  if (in.accept("false")) return WmLevel::inhibited;
  if (in.accept("reset")) return WmLevel::reset;
  throw SyntaxError(in.line(), "expected true, false or reset");
}

template <typename T>
T parse_whole(std::string_view text, T (*parse)(TokenStream&)) {
  TokenStream in(tokenize(text));
  T value = parse(in);
  if (!in.at_end()) throw SyntaxError(in.line(), "trailing input in '" + std::string(text) + "'");
  return value;
}

}  // namespace

const core::MironDefinition* BehaviorModel::find_miron(std::string_view name) const {
  const auto it = std::find_if(mirons.begin(), mirons.end(), [&](const auto& m) { return m.name == name; });
  return it == mirons.end() ? nullptr : &*it;
}

const RuleDecl* BehaviorModel::find_rule(int id) const {
  const auto it = std::find_if(rules.begin(), rules.end(), [&](const auto& r) { return r.id == id; });
  return it == rules.end() ? nullptr : &*it;
}

const RuleDecl* BehaviorModel::find_rule(std::string_view label) const {
  const auto it = std::find_if(rules.begin(), rules.end(), [&](const auto& r) { return r.label == label; });
  return it == rules.end() ? nullptr : &*it;
}

void BehaviorModel::link_successors() {
  for (auto& r : rules) r.successors.clear();
  for (const auto& r : rules) {
    for (const auto& b : r.branches) {
      for (int pred : b.from_rules) {
        auto it = std::find_if(rules.begin(), rules.end(), [&](const auto& x) { return x.id == pred; });
        if (it != rules.end() && std::find(it->successors.begin(), it->successors.end(), r.id) == it->successors.end()) {
          it->successors.push_back(r.id);
        }
      }
    }
  }
  for (auto& r : rules) std::sort(r.successors.begin(), r.successors.end());
}

std::string_view to_string(WmLevel level) {
  switch (level) {
    case WmLevel::activated: return "true";
    case WmLevel::inhibited: return "false";
    case WmLevel::reset: return "reset";
  }
  return "reset";
}

std::string_view to_string(VarState state) {
  switch (state) {
    case VarState::filled: return "filled";
    case VarState::empty: return "empty";
    case VarState::changed: return "changed";
    case VarState::unchanged: return "unchanged";
  }
  return "filled";
}

std::string to_string(const ConditionAtom& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, MironPerceived>) {
          return "heard " + std::string(core::to_string(a.channel)) + " " + a.name;
        } else if constexpr (std::is_same_v<T, MironCompleted>) {
          return "done " + a.name;
        } else if constexpr (std::is_same_v<T, ActionFailed>) {
          return "failed " + a.name;
        } else if constexpr (std::is_same_v<T, VariableState>) {
          return std::string(to_string(a.state)) + " " + a.name;
        } else {
          return "state " + a.name + " " + std::string(to_string(a.level));
        }
      },
      atom);
}

std::string to_string(const ActionAtom& atom) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ProduceMiron>) {
          std::string s = "say " + std::string(core::to_string(a.channel)) + " " + a.name;
          switch (a.criterion.mode) {
            case core::ProductionCriterion::Mode::indexed: s += " index " + std::to_string(*a.criterion.index); break;
            case core::ProductionCriterion::Mode::seeded_random: s += " seed " + std::to_string(*a.criterion.rng_seed); break;
            case core::ProductionCriterion::Mode::uniform_random: break;
          }
          return s;
        } else if constexpr (std::is_same_v<T, SetState>) {
          return "set " + a.name + " " + std::string(to_string(a.level));
        } else if constexpr (std::is_same_v<T, WriteVariable>) {
          return a.value ? "write " + a.name + " " + quote(*a.value) : "clear " + a.name;
        } else {
          std::string s = "call " + a.name;
          for (const auto& arg : a.args) s += " " + (arg.literal ? quote(arg.text) : arg.text);
          return s;
        }
      },
      atom);
}

ParsedCondition parse_condition_term(TokenStream& in) {
  const int line = in.line();
  if (in.accept("heard")) {
    const auto channel = accept_channel(in);
    MironPerceived atom{in.identifier("a Miron name"), channel.value_or(Direction::outer)};
    return {ConditionAtom{std::move(atom)}, !channel.has_value()};
  }
  if (in.accept("done")) return {ConditionAtom{MironCompleted{in.identifier("a Miron or action name")}}};
  if (in.accept("failed")) return {ConditionAtom{ActionFailed{in.identifier("a Miron or action name")}}};
  for (auto [word, state] : {std::pair{"filled", VarState::filled}, std::pair{"empty", VarState::empty},
                             std::pair{"changed", VarState::changed}, std::pair{"unchanged", VarState::unchanged}}) {
    if (in.accept(word)) return {ConditionAtom{VariableState{in.identifier("a variable name"), state}}};
  }
  if (in.accept("state")) {
    std::string name = in.identifier("a state name");
    return {ConditionAtom{InternalState{std::move(name), wm_level(in)}}};
  }
  if (in.accept("after")) return {RuleLink{in.identifier("a rule name"), line}};

  const Token& t = in.peek();
  if (t.kind == Token::Kind::identifier) {
    throw SyntaxError(line, "unsupported condition '" + t.text +
                                "' (supported: heard, done, failed, filled, empty, changed, unchanged, state, after)");
  }
  throw SyntaxError(line, "expected a condition");
}

ParsedAction parse_action_term(TokenStream& in) {
  const int line = in.line();
  if (in.accept("say")) {
    const auto channel = accept_channel(in);
    ProduceMiron atom{in.identifier("a Miron name"), channel.value_or(Direction::outer), {}};
    if (in.accept("index")) {
      atom.criterion = core::ProductionCriterion::indexed(static_cast<std::size_t>(in.integer("an index")));
    } else if (in.accept("seed")) {
      atom.criterion = core::ProductionCriterion::seeded(static_cast<std::uint64_t>(in.integer("a seed")));
    } else {
      in.accept("random");
    }
    return {ActionAtom{std::move(atom)}, !channel.has_value()};
  }
  if (in.accept("set")) {
    std::string name = in.identifier("a state name");
    return {ActionAtom{SetState{std::move(name), wm_level(in)}}};
  }
  if (in.accept("write")) {
    std::string name = in.identifier("a variable name");
    if (in.accept("empty")) return {ActionAtom{WriteVariable{std::move(name), std::nullopt}}};
    return {ActionAtom{WriteVariable{std::move(name), in.string_literal("a value")}}};
  }
  if (in.accept("clear")) return {ActionAtom{WriteVariable{in.identifier("a variable name"), std::nullopt}}};
  if (in.accept("call")) {
    InvokeInternal atom{in.identifier("an internal action name"), {}};
    while (true) {
      const Token& t = in.peek();
      if (t.kind == Token::Kind::identifier && !t.is("and")) {
        atom.args.push_back(CallArg{false, in.next().text});
      } else if (t.kind == Token::Kind::string) {
        atom.args.push_back(CallArg{true, in.next().text});
      } else {
        break;
      }
    }
    return {ActionAtom{std::move(atom)}};
  }
  const Token& t = in.peek();
  if (t.kind == Token::Kind::identifier) {
    throw SyntaxError(line, "unsupported action '" + t.text + "' (supported: say, set, write, clear, call)");
  }
  throw SyntaxError(line, "expected an action");
}

ConditionAtom parse_condition(std::string_view text) {
  auto parsed = parse_whole<ParsedCondition>(text, &parse_condition_term);
  if (std::holds_alternative<RuleLink>(parsed.term)) {
    throw SyntaxError(1, "'after' links are not condition lines");
  }
  return std::get<ConditionAtom>(parsed.term);
}

ActionAtom parse_action(std::string_view text) { return parse_whole<ParsedAction>(text, &parse_action_term).atom; }

ConditionSegment segment_of(const ConditionAtom& atom) {
  return std::visit(
      [](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, MironPerceived>) return ConditionSegment::miron_intent;
        else if constexpr (std::is_same_v<T, VariableState>) return ConditionSegment::named_entity;
        else if constexpr (std::is_same_v<T, InternalState>) return ConditionSegment::working_memory;
        else return ConditionSegment::action_feedback;
      },
      atom);
}

ActionSegment segment_of(const ActionAtom& atom) {
  return std::visit(
      [](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ProduceMiron>) {
          return a.channel == Direction::inner ? ActionSegment::inner_miron : ActionSegment::outer_miron;
        } else if constexpr (std::is_same_v<T, SetState>) {
          return ActionSegment::wm_change;
        } else {
          return ActionSegment::internal_action;
        }
      },
      atom);
}

std::string_view to_string(ConditionSegment s) {
  switch (s) {
    case ConditionSegment::miron_intent: return "miron_intent";
    case ConditionSegment::named_entity: return "named_entity";
    case ConditionSegment::action_feedback: return "action_feedback";
    case ConditionSegment::working_memory: return "working_memory";
  }
  return "";
}

std::string_view to_string(ActionSegment s) {
  switch (s) {
    case ActionSegment::inner_miron: return "inner_miron";
    case ActionSegment::outer_miron: return "outer_miron";
    case ActionSegment::internal_action: return "internal_action";
    case ActionSegment::wm_change: return "wm_change";
  }
  return "";
}

std::vector<std::string> interpolated_names(std::string_view text) {
  std::vector<std::string> names;
  interpolate(text, [&](const std::string& n) {
    names.push_back(n);
    return std::string();
  });
  return names;
}

}  // namespace miron::model
