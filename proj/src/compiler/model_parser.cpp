#include "miron/compiler/model_parser.hpp"

#include "miron/model/atom_parser.hpp"

#include <algorithm>
#include <map>

namespace miron::compiler {

using model::Token;
using model::TokenStream;

namespace {

// A condition or action whose channel was left implicit; fixed once all Mirons are known.
struct PendingChannel {
  std::size_t rule;
  std::size_t branch;  // SIZE_MAX for actions
  std::size_t index;
  int line;
};

struct PendingLink {
  std::size_t rule;
  std::size_t branch;  // SIZE_MAX for `inhibits`
  std::string label;
  int line;
};

std::vector<std::string> string_list(TokenStream& in, std::string_view what) {
  std::vector<std::string> out{in.string_literal(what)};
  while (in.accept(",")) out.push_back(in.string_literal(what));
  return out;
}

// `and` also continues a statement when it starts the next line.
bool accept_and(TokenStream& in) {
  if (in.accept("and")) return true;
  std::size_t ahead = 0;
  while (in.peek(ahead).kind == Token::Kind::newline) ++ahead;
  if (ahead == 0 || !in.peek(ahead).is("and")) return false;
  in.skip_newlines();
  in.next();
  return true;
}

template <typename T>
void push_unique(std::vector<T>& v, T value) {
  if (std::find(v.begin(), v.end(), value) == v.end()) v.push_back(std::move(value));
}

}  // namespace

core::MironDefinition parse_miron_block(TokenStream& in) {
  const int line = in.line();
  core::MironDefinition def;
  def.name = in.identifier("a Miron name");
  in.skip_newlines();
  in.expect("{");
  in.skip_newlines();
  std::vector<std::string> templates;
  while (!in.accept("}")) {
    const int stmt = in.line();
    const std::string key = in.identifier("a Miron property");
    if (key == "modality") {
      def.modality = in.identifier("a modality");
    } else if (key == "direction") {
      const std::string d = in.identifier("inner or outer");
      const auto parsed = core::parse_direction(d);
      if (!parsed) throw SyntaxError(stmt, "direction must be inner or outer, not '" + d + "'");
      def.direction = *parsed;
    } else if (key == "template") {
      for (auto& t : string_list(in, "a template")) templates.push_back(std::move(t));
    } else if (key == "slot") {
      core::SlotDecl slot;
      slot.name = in.identifier("a slot name");
      if (def.find_slot(slot.name)) throw SyntaxError(stmt, "duplicate slot '" + slot.name + "'");
      while (true) {
        if (in.accept("pattern")) {
          slot.pattern = in.string_literal("a slot pattern");
        } else if (in.accept("examples")) {
          slot.examples = string_list(in, "an example value");
        } else {
          break;
        }
      }
      def.slots.push_back(std::move(slot));
    } else if (key == "data") {
      std::string name = in.identifier("a data slot name");
      std::string value = in.string_literal("a data slot value");
      if (!def.data_slots.emplace(name, std::move(value)).second) {
        throw SyntaxError(stmt, "duplicate data slot '" + name + "'");
      }
    } else {
      throw SyntaxError(stmt, "unknown Miron property '" + key + "'");
    }
    in.end_statement();
  }
  def.template_sources = std::move(templates);
  try {
    core::finalize_definition(def);
  } catch (const core::TemplateError& e) {
    throw SyntaxError(line, "Miron '" + def.name + "': " + e.what());
  }
  return def;
}

model::BehaviorModel parse_model(std::string_view source) {
  TokenStream in(model::tokenize(source));
  model::BehaviorModel m;
  std::map<std::string, int> miron_lines;
  std::map<std::string, std::size_t> rule_index;
  std::vector<PendingChannel> channels;
  std::vector<PendingLink> links;

  in.skip_newlines();
  while (!in.at_end()) {
    const int line = in.line();
    const std::string kw = in.identifier("'miron', 'rule', 'var' or 'state'");
    if (kw == "miron") {
      auto def = parse_miron_block(in);
      if (!miron_lines.emplace(def.name, line).second) throw DuplicateMironName(line, def.name);
      m.mirons.push_back(std::move(def));
    } else if (kw == "var" || kw == "state") {
      auto& target = kw == "var" ? m.declared_variables : m.declared_states;
      do {
        target.insert(in.identifier("a name"));
      } while (in.accept(","));
    } else if (kw == "rule") {
      model::RuleDecl rule;
      rule.line = line;
      rule.label = in.identifier("a rule name");
      rule.id = model::kFirstRuleId + static_cast<int>(m.rules.size());
      if (!rule_index.emplace(rule.label, m.rules.size()).second) {
        throw SyntaxError(line, "duplicate rule '" + rule.label + "'");
      }
      const std::size_t ri = m.rules.size();
      in.skip_newlines();
      in.expect("{");
      in.skip_newlines();
      while (!in.accept("}")) {
        const int stmt = in.line();
        const std::string key = in.identifier("when, then, inhibits or note");
        if (key == "when") {
          model::Branch branch;
          branch.line = stmt;
          const std::size_t bi = rule.branches.size();
          do {
            auto parsed = model::parse_condition_term(in);
            if (auto* link = std::get_if<model::RuleLink>(&parsed.term)) {
              links.push_back({ri, bi, link->label, link->line});
            } else {
              auto& atom = std::get<model::ConditionAtom>(parsed.term);
              if (std::find(branch.atoms.begin(), branch.atoms.end(), atom) != branch.atoms.end()) continue;
              if (parsed.channel_defaulted) channels.push_back({ri, bi, branch.atoms.size(), stmt});
              branch.atoms.push_back(std::move(atom));
            }
          } while (accept_and(in));
          rule.branches.push_back(std::move(branch));
        } else if (key == "then") {
          do {
            auto parsed = model::parse_action_term(in);
            if (parsed.channel_defaulted) channels.push_back({ri, SIZE_MAX, rule.actions.size(), stmt});
            rule.actions.push_back(std::move(parsed.atom));
          } while (accept_and(in));
        } else if (key == "inhibits") {
          do {
            links.push_back({ri, SIZE_MAX, in.identifier("a rule name"), stmt});
          } while (in.accept(","));
        } else if (key == "note") {
          in.string_literal("a note");
        } else {
          throw SyntaxError(stmt, "unknown rule property '" + key + "'");
        }
        in.end_statement();
      }
      m.rules.push_back(std::move(rule));
    } else {
      throw SyntaxError(line, "expected 'miron', 'rule', 'var' or 'state', found '" + kw + "'");
    }
    in.end_statement();
  }

  for (const auto& link : links) {
    const auto it = rule_index.find(link.label);
    if (it == rule_index.end()) throw UnknownReference(link.line, link.label, "rule");
    auto& rule = m.rules[link.rule];
    const int id = m.rules[it->second].id;
    if (link.branch == SIZE_MAX) push_unique(rule.inhibits, id);
    else push_unique(rule.branches[link.branch].from_rules, id);
  }
  for (auto& rule : m.rules) {
    for (auto& b : rule.branches) std::sort(b.from_rules.begin(), b.from_rules.end());
    std::sort(rule.inhibits.begin(), rule.inhibits.end());
  }

  for (const auto& p : channels) {
    auto& rule = m.rules[p.rule];
    std::string* name;
    model::Direction* channel;
    if (p.branch == SIZE_MAX) {
      auto& a = std::get<model::ProduceMiron>(rule.actions[p.index]);
      name = &a.name;
      channel = &a.channel;
    } else {
      auto& a = std::get<model::MironPerceived>(rule.branches[p.branch].atoms[p.index]);
      name = &a.name;
      channel = &a.channel;
    }
    if (const auto* def = m.find_miron(*name)) *channel = def->direction;
  }

  // Miron references must resolve; `done`/`failed` may also name an internal action.
  std::set<std::string> called;
  for (const auto& rule : m.rules) {
    for (const auto& a : rule.actions) {
      if (const auto* call = std::get_if<model::InvokeInternal>(&a)) called.insert(call->name);
    }
  }
  auto reserved = [](const std::string& n) { return n == model::kSessionStart || n == model::kNoMatch; };
  for (const auto& rule : m.rules) {
    for (const auto& b : rule.branches) {
      for (const auto& atom : b.atoms) {
        if (const auto* heard = std::get_if<model::MironPerceived>(&atom)) {
          if (!m.find_miron(heard->name) && !reserved(heard->name)) throw UnknownReference(b.line, heard->name, "Miron");
        } else if (const auto* done = std::get_if<model::MironCompleted>(&atom)) {
          if (!m.find_miron(done->name) && !called.count(done->name)) {
            throw UnknownReference(b.line, done->name, "Miron or internal action");
          }
        } else if (const auto* failed = std::get_if<model::ActionFailed>(&atom)) {
          if (!m.find_miron(failed->name) && !called.count(failed->name)) {
            throw UnknownReference(b.line, failed->name, "Miron or internal action");
          }
        }
      }
    }
    for (const auto& a : rule.actions) {
      if (const auto* say = std::get_if<model::ProduceMiron>(&a)) {
        if (!m.find_miron(say->name)) throw UnknownReference(rule.line, say->name, "Miron");
      }
    }
  }

  m.link_successors();
  return m;
}

}  // namespace miron::compiler
