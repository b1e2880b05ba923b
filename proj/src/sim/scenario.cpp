#include "miron/sim/scenario.hpp"

#include "miron/compiler/model_parser.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace miron::sim {

using model::Token;
using model::TokenStream;

namespace {

std::string read_file(const std::filesystem::path& p, int line) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SyntaxError(line, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(TokenStream& in, std::string_view what) {
  const long long n = in.integer(what);
  if (n < 0) throw SyntaxError(in.line(), std::string(what) + " must not be negative");
  return static_cast<std::size_t>(n);
}

ProduceAs parse_produce_as(TokenStream& in) {
  ProduceAs p;
  p.miron = in.identifier("a user-side Miron name");
  while (in.peek().kind == Token::Kind::identifier && in.peek(1).is("=")) {
    std::string slot = in.next().text;
    in.next();
    p.bindings[slot] = in.string_literal("a slot value");
  }
  if (in.accept("index")) {
    p.criterion = core::ProductionCriterion::indexed(count(in, "an index"));
  } else if (in.accept("seed")) {
    p.criterion = core::ProductionCriterion::seeded(static_cast<std::uint64_t>(in.integer("a seed")));
  }
  return p;
}

Assertion parse_assertion(TokenStream& in, int line) {
  Assertion a;
  a.line = line;
  const std::string what = in.identifier("state, var, outbound, outputs or transcript");
  if (what == "state") {
    a.kind = Assertion::Kind::state;
    a.name = in.identifier("a state name");
    const std::string level = in.identifier("true, false or unset");
    if (level == "true" || level == "false") a.value = level;
    else if (level != "unset") throw SyntaxError(line, "expected true, false or unset");
  } else if (what == "var") {
    a.kind = Assertion::Kind::variable;
    a.name = in.identifier("a variable name");
    if (!in.accept("empty")) a.value = in.string_literal("a value");
  } else if (what == "outbound") {
    a.kind = Assertion::Kind::outbound;
    a.count = count(in, "a message count");
  } else if (what == "outputs") {
    a.kind = Assertion::Kind::outputs;
    a.count = count(in, "an output count");
  } else if (what == "transcript") {
    a.kind = Assertion::Kind::transcript_contains;
    in.expect("contains");
    a.value = in.string_literal("a text");
  } else {
    throw SyntaxError(line, "unknown assertion '" + what + "'");
  }
  return a;
}

}  // namespace

std::string Assertion::describe() const {
  switch (kind) {
    case Kind::state: return "state " + name + " " + value.value_or("unset");
    case Kind::variable: return "var " + name + " " + (value ? model::quote(*value) : std::string("empty"));
    case Kind::outbound: return "outbound " + std::to_string(count);
    case Kind::outputs: return "outputs " + std::to_string(count);
    case Kind::transcript_contains: return "transcript contains " + model::quote(value.value_or(""));
  }
  return "";
}

const core::MironDefinition* Scenario::find_user_miron(std::string_view name) const {
  const auto it = std::find_if(user_mirons.begin(), user_mirons.end(), [&](const auto& m) { return m.name == name; });
  return it == user_mirons.end() ? nullptr : &*it;
}

Scenario parse_scenario(std::string_view source, const std::filesystem::path& base_dir) {
  TokenStream in(model::tokenize(source));
  Scenario sc;
  in.skip_newlines();
  const int header = in.line();
  in.expect("scenario");
  sc.name = in.identifier("a scenario name");
  in.skip_newlines();
  in.expect("{");
  in.skip_newlines();

  bool seeded = false;
  std::vector<std::pair<std::string, int>> produced;
  auto add_miron = [&](core::MironDefinition def, int line) {
    if (sc.find_user_miron(def.name)) throw SyntaxError(line, "user-side Miron '" + def.name + "' defined twice");
    sc.user_mirons.push_back(std::move(def));
  };

  while (!in.accept("}")) {
    const int line = in.line();
    const std::string kw = in.identifier("a scenario statement");
    if (kw == "seed") {
      sc.seed = static_cast<std::uint64_t>(in.integer("a seed"));
      seeded = true;
    } else if (kw == "clock") {
      sc.clock = in.string_literal("a time");
    } else if (kw == "kv") {
      sc.kv_file = base_dir / in.string_literal("a kv file");
    } else if (kw == "mirons") {
      const auto path = base_dir / in.string_literal("a model file");
      model::BehaviorModel m;
      try {
        m = compiler::parse_model(read_file(path, line));
      } catch (const SyntaxError& e) {
        throw SyntaxError(line, path.filename().string() + ": " + e.what());
      }
      for (auto& def : m.mirons) add_miron(std::move(def), line);
    } else if (kw == "miron") {
      add_miron(compiler::parse_miron_block(in), line);
    } else if (kw == "user") {
      if (in.accept("as")) {
        auto p = parse_produce_as(in);
        produced.emplace_back(p.miron, line);
        sc.steps.push_back({std::move(p), line});
      } else {
        FixedUtterance u;
        if (in.peek().kind == Token::Kind::identifier) u.modality = in.next().text;
        u.text = in.string_literal("an utterance");
        sc.steps.push_back({std::move(u), line});
      }
    } else if (kw == "expect") {
      ExpectOutput e;
      if (in.accept("none")) {
        e.kind = ExpectOutput::Kind::none;
      } else if (in.accept("text")) {
        e.kind = ExpectOutput::Kind::text;
        e.value = in.string_literal("an expected utterance");
      } else {
        e.value = in.identifier("an intent, text or none");
      }
      sc.steps.push_back({std::move(e), line});
    } else if (kw == "assert") {
      sc.assertions.push_back(parse_assertion(in, line));
    } else {
      throw SyntaxError(line, "unknown scenario statement '" + kw + "'");
    }
    in.end_statement();
  }
  in.skip_newlines();
  if (!in.at_end()) throw SyntaxError(in.line(), "one scenario per document");

  if (!seeded) throw SyntaxError(header, "scenario '" + sc.name + "' has no seed");
  if (sc.assertions.empty()) throw SyntaxError(header, "scenario '" + sc.name + "' has no assertion");
  for (const auto& [name, line] : produced) {
    const auto* def = sc.find_user_miron(name);
    if (!def) throw SyntaxError(line, "unknown user-side Miron '" + name + "'");
    if (def->direction != core::Direction::outer) {
      throw SyntaxError(line, "user-side Miron '" + name + "' is inner; users speak on the outer channel");
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  return parse_scenario(read_file(file, 0), file.parent_path());
}

}  // namespace miron::sim
