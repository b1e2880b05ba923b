#include "doctest.h"

#include "miron/core/expansion.hpp"
#include "miron/runtime/config.hpp"
#include "support/fixtures.hpp"

#include <cstdlib>
#include <random>

using namespace miron;
using runtime::Session;

namespace {

Session greeting_session(std::uint64_t seed = 1) {
  return Session(testing::runtime_fixture("greeting"), runtime::builtin_registry(testing::fixture_config()), {seed});
}

const char* kProbeModel = R"(
var x
miron setx {
  template "set {v:x}"
  slot x pattern "\\S+"
}
rule saw_change {
  when heard setx and changed x
  then call probe "changed"
}
rule saw_same {
  when heard setx and unchanged x
  then call probe "unchanged"
}
)";

}  // namespace

TEST_CASE("fresh session") {
  auto s = greeting_session();
  const auto snap = s.snapshot();
  CHECK(snap.step == 0);
  CHECK(snap.active_rules.empty());
  CHECK(snap.working_memory.empty());
  CHECK(snap.named_entities.empty());
  CHECK(s.transcript().empty());
  CHECK(s.tick().empty());
}

TEST_CASE("ingest writes slots and data slots") {
  auto s = greeting_session();
  const auto results = s.ingest_utterance("Good morning");
  REQUIRE(results.size() == 1);
  CHECK(results[0].intent == "say_Hello");
  const auto ne = s.snapshot().named_entities;
  CHECK(ne.at("phaseOfDay") == "morning");
  CHECK(ne.at("politeForm") == "true");
  CHECK(ne.at("speechAct") == "greetings");
  CHECK(ne.at("casualForm") == "false");
}

TEST_CASE("rule-107 behavior: one answer, state flipped, self-deactivation") {
  auto s = greeting_session();
  CHECK(s.start().empty());
  CHECK(s.snapshot().working_memory.at("greetingsExpected") == "activated");

  s.ingest_utterance("Hello");
  const auto out = s.tick();
  REQUIRE(out.size() == 1);
  CHECK(out[0].intent == "say_Hello");
  const auto def = s.model().find_miron("say_Hello");
  const auto allowed = core::expand(*def, {});
  CHECK(std::find(allowed.begin(), allowed.end(), out[0].text) != allowed.end());

  const auto snap = s.snapshot();
  CHECK(snap.working_memory.at("greetingsExpected") == "inhibited");
  CHECK(snap.fired_rules == std::vector<std::string>{"greet"});
  CHECK(snap.active_rules.empty());

  s.ingest_utterance("Hello");
  CHECK(s.tick().empty());
  CHECK(s.snapshot().fired_rules.empty());
}

TEST_CASE("unrecognized input raises the no-match event") {
  auto m = testing::runtime_from_source(R"(
miron sorry { template "Sorry, I did not understand." }
rule complain { when heard _nomatch
 then say sorry }
)");
  Session s(m, {}, {});
  CHECK(s.ingest_utterance("xyzzy plugh").empty());
  const auto out = s.tick();
  REQUIRE(out.size() == 1);
  CHECK(out[0].text == "Sorry, I did not understand.");
}

TEST_CASE("two matching Mirons raise two lines in the same step") {
  auto m = testing::runtime_from_source(R"(
miron yes { template "<yes|ok>" }
miron agree { template "<ok|fine>" }
rule both { when heard yes and heard agree
 then say yes index 0 }
)");
  Session s(m, {}, {});
  const auto r = s.ingest_utterance("OK");
  REQUIRE(r.size() == 2);
  const auto out = s.tick();
  REQUIRE(out.size() == 1);
  CHECK(out[0].text == "yes");
}

TEST_CASE("inner speech resolves within one tick") {
  Session s(testing::runtime_fixture("inner_speech"), runtime::builtin_registry(testing::fixture_config("10:30")), {3});
  s.ingest_utterance("what time is it?");
  const auto out = s.tick();
  REQUIRE(out.size() == 1);
  CHECK(out[0].intent == "tell_time");
  CHECK(out[0].text.find("10:30") != std::string::npos);
  CHECK(s.snapshot().fired_rules == std::vector<std::string>{"wonder", "look_at_clock", "answer_time"});
  CHECK(s.snapshot().named_entities.at("currentTime") == "10:30");

  std::vector<std::string> dirs;
  for (const auto& r : s.transcript()) dirs.push_back(r.dir);
  CHECK(dirs == std::vector<std::string>{"in", "inner", "action", "out"});
  CHECK(s.transcript()[1].payload["recognized"] == nlohmann::json::array({"ask_time"}));
}

TEST_CASE("inner and injected perceptions look the same to the rules") {
  auto m = testing::runtime_fixture("inner_speech");
  auto reg = [] { return runtime::builtin_registry(testing::fixture_config("08:15")); };
  std::vector<engine::Binary> seen_a, seen_b;

  Session a(m, reg(), {5});
  a.ingest_utterance("do you know the time");
  a.tick();
  Session b(m, reg(), {5});
  core::RecognitionResult inner;
  inner.intent = "ask_time";
  b.ingest_result(inner, model::Direction::inner);
  b.tick();
  // Both answered with the same time, via the same clock rule.
  CHECK(a.snapshot().named_entities == b.snapshot().named_entities);
  const auto fa = a.snapshot().fired_rules;
  const auto fb = b.snapshot().fired_rules;
  CHECK(std::vector<std::string>(fa.begin() + 1, fa.end()) == fb);
}

TEST_CASE("a designed livelock hits the iteration limit") {
  auto m = testing::runtime_from_source(R"(
miron go {}
rule ping { when heard go
 when after pong
 then call nothing }
rule pong { when after ping
 then call nothing }
)");
  runtime::InternalActionRegistry reg;
  reg.register_action("nothing", [](const runtime::HandlerCall&) { return runtime::HandlerResult{}; });
  Session s(m, reg, {0, 100});
  s.ingest_utterance("go");
  try {
    s.tick();
    FAIL("expected IterationLimitExceeded");
  } catch (const runtime::IterationLimitExceeded& e) {
    CHECK(e.trace().size() == 100);
    CHECK(e.trace()[0].find("ping") != std::string::npos);
  }
  CHECK(s.snapshot().active_rules.empty());
  CHECK(s.tick().empty());
}

TEST_CASE("internal actions") {
  SUBCASE("duplicate registration") {
    runtime::InternalActionRegistry reg;
    reg.register_action("a", [](const runtime::HandlerCall&) { return runtime::HandlerResult{}; });
    CHECK_THROWS_AS(reg.register_action("a", [](const runtime::HandlerCall&) { return runtime::HandlerResult{}; }),
                    runtime::DuplicateRegistration);
  }
  SUBCASE("built-ins") {
    const auto reg = runtime::builtin_registry(testing::fixture_config("07:45"));
    core::Bindings ne;
    const auto clock = (*reg.find("clock"))({"clock", {}, ne});
    CHECK(clock.writes.at("currentTime") == "07:45");
    const auto kv = (*reg.find("kv_query"))({"kv_query", {"visitor", "Smith"}, ne});
    CHECK_FALSE(kv.error);
    CHECK(kv.writes.at("contactPerson") == "Ms Martin");
    CHECK((*reg.find("kv_query"))({"kv_query", {"visitor", "nobody"}, ne}).error);
    const auto msg = (*reg.find("send_message"))({"send_message", {"hello", "there"}, ne});
    CHECK(msg.outbound == std::optional<std::string>("hello there"));
  }
  SUBCASE("unknown and failing handlers become failure events") {
    auto m = testing::runtime_from_source(R"(
miron go {}
miron oops { template "that failed" }
miron fine { template "that worked" }
rule try_it { when heard go
 then call missing and call broken }
rule report_missing { when failed missing
 then say oops }
rule report_broken { when failed broken
 then say fine }
)");
    runtime::InternalActionRegistry reg;
    reg.register_action("broken", [](const runtime::HandlerCall&) -> runtime::HandlerResult { throw std::runtime_error("boom"); });
    Session s(m, reg, {});
    s.ingest_utterance("go");
    const auto out = s.tick();
    REQUIRE(out.size() == 2);
    std::set<std::string> intents{out[0].intent, out[1].intent};
    CHECK(intents == std::set<std::string>{"oops", "fine"});
  }
  SUBCASE("production without a complete utterance fails softly") {
    auto m = testing::runtime_from_source(R"(
var who
miron go {}
miron greet_by_name { template "Hello {Anna:who}"
 slot who }
miron fallback { template "Hello there" }
rule try_it { when heard go
 then say greet_by_name }
rule recover { when failed greet_by_name
 then say fallback }
)");
    Session s(m, {}, {});
    s.ingest_utterance("go");
    const auto out = s.tick();
    REQUIRE(out.size() == 1);
    CHECK(out[0].text == "Hello there");
  }
}

TEST_CASE("change detection follows direct bookkeeping") {
  auto m = testing::runtime_from_source(kProbeModel);
  std::vector<std::string> probes;
  runtime::InternalActionRegistry reg;
  reg.register_action("probe", [&](const runtime::HandlerCall& c) {
    probes.push_back(c.args.at(0));
    return runtime::HandlerResult{};
  });
  Session s(m, reg, {});
  std::mt19937_64 rng(9);
  std::optional<std::string> last;
  for (int i = 0; i < 300; ++i) {
    const std::string v = "v" + std::to_string(rng() % 3);
    const bool expected_change = !last || *last != v;
    probes.clear();
    s.ingest_utterance("set " + v);
    s.tick();
    REQUIRE(probes.size() == 1);
    CHECK(probes[0] == (expected_change ? "changed" : "unchanged"));
    last = v;
  }
}

TEST_CASE("events are one-shot and WM stays exclusive") {
  auto m = testing::runtime_from_source(R"(
state s
miron hello {}
miron reset_it { template "reset" }
rule on_hello { when heard hello
 then set s true }
rule flip { when heard hello and state s true
 then set s false }
rule clear { when heard reset_it
 then set s reset }
)");
  Session s(m, {}, {});
  s.ingest_utterance("hello");
  s.tick();
  CHECK(s.snapshot().fired_rules == std::vector<std::string>{"on_hello"});
  CHECK(s.snapshot().working_memory.at("s") == "activated");
  s.ingest_utterance("hello");
  s.tick();
  // Both fire on the same step; the WM update is a single well-defined level.
  CHECK(s.snapshot().fired_rules.size() == 2);
  CHECK(s.snapshot().working_memory.size() == 1);
  s.ingest_utterance("reset");
  s.tick();
  CHECK(s.snapshot().working_memory.empty());
  for (const auto& line : s.snapshot().conditions) CHECK(line.rfind("state s", 0) != 0);
}

TEST_CASE("replay determinism") {
  auto run = [](std::uint64_t seed) {
    Session s(testing::runtime_fixture("greeting"), runtime::builtin_registry(testing::fixture_config()), {seed});
    s.start();
    for (const char* u : {"Good evening", "Hi", "nonsense", "Hello"}) {
      s.ingest_utterance(u);
      s.tick();
    }
    return std::make_pair(s.transcript_jsonl(), s.snapshot());
  };
  const auto a = run(42), b = run(42);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("artifact mismatch is detected at session creation") {
  auto a = testing::artifacts_from_source(testing::read_text(testing::model_path("greeting")));
  a.dictionary.conditions.pop_back();
  a.dictionary.condition_segments.pop_back();
  CHECK_THROWS_AS(runtime::make_runtime_model(a), runtime::ArtifactMismatch);
}

TEST_CASE("configuration") {
  const auto dir = std::filesystem::temp_directory_path() / "miron_test_config";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << R"({"seed": 7, "max_iterations": 50, "kv_file": "kv.json", "clock": "09:00"})";
    std::ofstream(dir / "bad.json") << R"({"sed": 7})";
  }
  const auto c = runtime::load_config(dir / "ok.json");
  CHECK(c.seed == 7);
  CHECK(c.max_iterations == 50);
  CHECK(*c.kv_file == dir / "kv.json");
  CHECK(*c.clock == "09:00");
  CHECK_THROWS_AS(runtime::load_config(dir / "bad.json"), runtime::ConfigError);
  CHECK_THROWS_AS(runtime::load_config(dir / "absent.json"), runtime::ConfigError);

  setenv("MIRON_CONFIG", (dir / "ok.json").c_str(), 1);
  CHECK(runtime::resolve_config(std::nullopt).seed == 7);
  unsetenv("MIRON_CONFIG");
  CHECK(runtime::resolve_config(std::nullopt).seed == 0);
}
