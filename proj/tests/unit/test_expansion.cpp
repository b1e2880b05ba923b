#include "doctest.h"

#include "miron/core/expansion.hpp"
#include "support/template_oracle.hpp"

#include <algorithm>
#include <set>

using namespace miron::core;

namespace {

MironDefinition say_hello() {
  auto def = make_definition("say_Hello", {"<Hi|Hello|Good {Morning:phaseOfDay}>"},
                             {SlotDecl{"phaseOfDay", "morning|afternoon|evening|night", {}}});
  def.data_slots = {{"speechAct", "greetings"}, {"politeForm", "true"}, {"casualForm", "false"}};
  return def;
}

}  // namespace

TEST_CASE("say_Hello with one binding reaches three forms") {
  CHECK(expand(say_hello(), {{"phaseOfDay", "morning"}}) == std::vector<std::string>{"Hi", "Hello", "Good morning"});
}

TEST_CASE("unbound slot suppresses the expansions that use it") {
  CHECK(expand(say_hello(), {}) == std::vector<std::string>{"Hi", "Hello"});
  CHECK(expand(say_hello(), {{"phaseOfDay", ""}}) == std::vector<std::string>{"Hi", "Hello"});
}

TEST_CASE("one optional gives two expansions, included first") {
  const auto def = make_definition("help", {"(please )help"});
  CHECK(expand(def, {}) == std::vector<std::string>{"please help", "help"});
}

TEST_CASE("punctuation fragments attach without a space") {
  const auto def = make_definition("ask_time", {"(Sorry, )what time is it(, please)?"});
  // two independent optionals: in/in, in/out, out/in, out/out
  CHECK(expand(def, {}) == std::vector<std::string>{"Sorry, what time is it, please?", "Sorry, what time is it?",
                                                    "what time is it, please?", "what time is it?"});
}

TEST_CASE("deduplication keeps first occurrence") {
  const auto def = make_definition("dup", {"<a|(a)>", "a"});
  CHECK(expand(def, {}) == std::vector<std::string>{"a"});
}

TEST_CASE("bindings for undeclared slots are rejected") {
  CHECK_THROWS_AS(expand(say_hello(), {{"nope", "x"}}), ExpansionError);
}

TEST_CASE("expansion cap") {
  // 2^14 = 16384 combinations
  std::string source;
  for (int i = 0; i < 14; ++i) source += "(w" + std::to_string(i) + ") ";
  source += "end";
  const auto def = make_definition("big", {source});
  CHECK(count_combinations(def) == 16384);
  try {
    expand(def, {});
    FAIL("expected ExpansionExplosion");
  } catch (const ExpansionError& e) {
    CHECK(e.kind() == ExpansionError::Kind::explosion);
  }
  CHECK(expand(def, {}, 20'000).size() == 16384);
}

TEST_CASE("produce") {
  const auto def = say_hello();
  const Bindings evening{{"phaseOfDay", "evening"}};
  CHECK(expand(def, evening)[2] == "Good evening");
  CHECK(produce(def, evening, ProductionCriterion::indexed(2)) == "Good evening");
  CHECK_THROWS_AS(produce(def, evening, ProductionCriterion::indexed(3)), ExpansionError);

  const auto single = make_definition("yes", {"yes"});
  CHECK(produce(single, {}, ProductionCriterion::uniform()) == "yes");
  CHECK(produce(single, {}, ProductionCriterion::seeded(4)) == "yes");
  CHECK(produce(single, {}, ProductionCriterion::indexed(0)) == "yes");

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(produce(def, evening, ProductionCriterion::seeded(seed)) ==
          produce(def, evening, ProductionCriterion::seeded(seed)));
  }

  Rng a(9), b(9);
  for (int i = 0; i < 20; ++i) CHECK(produce(def, evening, {}, &a) == produce(def, evening, {}, &b));
}

TEST_CASE("seeded selection covers all expansions") {
  const auto def = say_hello();
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    seen.insert(produce(def, {{"phaseOfDay", "night"}}, ProductionCriterion::seeded(seed)));
  }
  CHECK(seen == std::set<std::string>{"Hi", "Hello", "Good night"});
}

TEST_CASE("no complete utterance") {
  const auto def = make_definition("where", {"to {City}"}, {SlotDecl{"City", "", {}}});
  try {
    produce(def, {}, ProductionCriterion::uniform());
    FAIL("expected NoCompleteUtterance");
  } catch (const ExpansionError& e) {
    CHECK(e.kind() == ExpansionError::Kind::no_complete_utterance);
  }
}

TEST_CASE("training data export") {
  const auto samples = export_training_data({say_hello()});
  std::vector<std::string> sentences;
  for (const auto& s : samples) sentences.push_back(s.sentence);
  CHECK(sentences == std::vector<std::string>{"Hi", "Hello", "Good morning", "Good afternoon", "Good evening",
                                              "Good night"});
  for (const auto& s : samples) CHECK(s.intent == "say_Hello");
  CHECK(samples[2].slots == Bindings{{"phaseOfDay", "morning"}});
  CHECK(samples[0].slots.empty());
  CHECK(export_training_data({}).empty());
}

TEST_CASE("training data count equals summed oracle expansion counts") {
  miron::testing::RandomTemplateGenerator gen(5);
  std::vector<MironDefinition> defs;
  for (int i = 0; i < 10; ++i) {
    auto def = gen.definition("m" + std::to_string(i));
    for (auto& s : def.slots) s.examples = {"v1", "v2"};
    defs.push_back(std::move(def));
  }
  std::size_t expected = 0;
  for (const auto& def : defs) {
    std::set<std::string> distinct;
    for (const char* a : {"v1", "v2"})
      for (const char* b : {"v1", "v2"})
        for (const char* c : {"v1", "v2"}) {
          for (auto& s : miron::testing::oracle_expand(def, {{"s0", a}, {"s1", b}, {"s2", c}})) distinct.insert(s);
        }
    expected += distinct.size();
  }
  CHECK(export_training_data(defs).size() == expected);
}

TEST_CASE("property: expand matches the reference enumerator on random trees") {
  miron::testing::RandomTemplateGenerator gen(2024);
  for (int i = 0; i < 200; ++i) {
    const auto def = gen.definition("m" + std::to_string(i));
    CHECK(count_combinations(def) == miron::testing::oracle_raw_count(def));
    const auto bindings = gen.complete_bindings(def);
    CHECK(expand(def, bindings) == miron::testing::oracle_expand(def, bindings));

    auto partial = bindings;
    partial.erase("s1");
    CHECK(expand(def, partial) == miron::testing::oracle_expand(def, partial));
  }
}
