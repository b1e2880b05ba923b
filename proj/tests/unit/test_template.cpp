#include "doctest.h"

#include "miron/core/template.hpp"
#include "support/template_oracle.hpp"

using namespace miron::core;

namespace {

TemplateNode lit(std::string text) { return TemplateNode{Literal{std::move(text)}}; }
TemplateNode slot(std::string name, std::string hint) { return TemplateNode{SlotRef{std::move(name), std::move(hint)}}; }
TemplateNode opt(std::vector<TemplateNode> nodes) { return TemplateNode{Optional{TemplateAst{std::move(nodes)}}}; }

}  // namespace

TEST_CASE("slot syntax maps surface text to slot names") {
  const auto ast = parse_template("from {Paris:Departure} to {Lyon:Destination}", {"Departure", "Destination"});
  const TemplateAst expected{{lit("from"), slot("Departure", "Paris"), lit("to"), slot("Destination", "Lyon")}};
  CHECK(ast == expected);
}

TEST_CASE("bare literal") {
  CHECK(parse_template("Hi", {}) == TemplateAst{{lit("Hi")}});
}

TEST_CASE("grammar field alternatives") {
  const auto ast = parse_template("<Hi|Hello|Good {Morning:phaseOfDay}>", {"phaseOfDay"});
  REQUIRE(ast.nodes.size() == 1);
  const auto& field = std::get<GrammarField>(ast.nodes[0].value);
  REQUIRE(field.alternatives.size() == 3);
  CHECK(field.alternatives[0] == TemplateAst{{lit("Hi")}});
  CHECK(field.alternatives[1] == TemplateAst{{lit("Hello")}});
  CHECK(field.alternatives[2] == TemplateAst{{lit("Good"), slot("phaseOfDay", "Morning")}});
}

TEST_CASE("optional parts trim outer whitespace per node") {
  const auto ast = parse_template("(Sorry, )what time is it(, please)?", {});
  const TemplateAst expected{{opt({lit("Sorry,")}), lit("what time is it"), opt({lit(", please")}), lit("?")}};
  CHECK(ast == expected);
}

TEST_CASE("bare slot uses its name as surface hint") {
  const auto ast = parse_template("Good {phaseOfDay}", {"phaseOfDay"});
  CHECK(ast == TemplateAst{{lit("Good"), slot("phaseOfDay", "phaseOfDay")}});
}

TEST_CASE("surface hint may contain colons") {
  const auto ast = parse_template("around {12:00:Time}", {"Time"});
  CHECK(ast == TemplateAst{{lit("around"), slot("Time", "12:00")}});
}

TEST_CASE("escaped brackets are literal") {
  const auto ast = parse_template(R"(press \<enter\>)", {});
  CHECK(ast == TemplateAst{{lit("press <enter>")}});
}

TEST_CASE("literals keep inner whitespace") {
  CHECK(parse_template("  a   b  ", {}) == TemplateAst{{lit("a   b")}});
}

TEST_CASE("error paths") {
  auto kind_of = [](std::string_view src, std::set<std::string> slots = {}) {
    try {
      parse_template(src, slots);
    } catch (const TemplateError& e) {
      return e.kind();
    }
    FAIL("expected a TemplateError for " << src);
    return TemplateError::Kind::empty_template;
  };

  CHECK(kind_of("(unclosed") == TemplateError::Kind::unbalanced_bracket);
  CHECK(kind_of("stray)") == TemplateError::Kind::unbalanced_bracket);
  CHECK(kind_of("<a|b") == TemplateError::Kind::unbalanced_bracket);
  CHECK(kind_of("{x") == TemplateError::Kind::unbalanced_bracket);
  CHECK(kind_of("(a>") == TemplateError::Kind::unbalanced_bracket);
  CHECK(kind_of("go to {Lyon:City}") == TemplateError::Kind::unknown_slot);
  CHECK(kind_of("<a||b>") == TemplateError::Kind::empty_alternative);
  CHECK(kind_of("<>") == TemplateError::Kind::empty_alternative);
  CHECK(kind_of("()") == TemplateError::Kind::empty_alternative);
  CHECK(kind_of("   ") == TemplateError::Kind::empty_template);
  CHECK(kind_of("{bad name}", {"bad"}) == TemplateError::Kind::bad_slot);

  try {
    parse_template("ab (cd", {});
  } catch (const TemplateError& e) {
    CHECK(e.position() == 3);
  }
}

TEST_CASE("referenced slots in first-occurrence order") {
  const auto ast = parse_template("<{a:Y}|{b:X}> ({c:Y})", {"X", "Y"});
  CHECK(referenced_slots(ast) == std::vector<std::string>{"Y", "X"});
}

TEST_CASE("property: to_source then parse restores random trees") {
  miron::testing::RandomTemplateGenerator gen(11);
  for (int i = 0; i < 200; ++i) {
    const auto def = gen.definition("m" + std::to_string(i));
    for (const auto& ast : def.templates) {
      const auto reparsed = parse_template(to_source(ast), def.slot_names());
      CHECK(reparsed == ast);
    }
  }
}
