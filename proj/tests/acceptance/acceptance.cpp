// Acceptance gate: one PASS/FAIL line per criterion; exit status 0 only if all pass.

#include "miron/cli/cli.hpp"
#include "miron/compiler/lower.hpp"
#include "miron/core/recognizer.hpp"
#include "miron/engine/network.hpp"
#include "miron/sim/runner.hpp"
#include "support/fixtures.hpp"
#include "support/random_model.hpp"
#include "support/template_oracle.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace miron;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(limit_seconds)) + " s budget)";
  }
  char time[32];
  std::snprintf(time, sizeof time, "%.2fs", secs);
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << time << "]" << std::endl;
  if (!o.pass) ++failures;
}

const std::vector<std::string> kFixtures = {"greeting", "inner_speech", "train", "receptionist"};

engine::Binary facts(const engine::Dictionary& d, std::initializer_list<const char*> names) {
  engine::Binary c(d.conditions.size());
  for (const char* n : names) c.at(*d.condition_index(n)) = 1;
  return c;
}

Outcome mirror_round_trip() {
  std::size_t checked = 0, failed = 0, fixture_mirons = 0;
  std::string first_failure;
  // Shipped fixture Mirons, over the cartesian product of representative slot values.
  for (const auto& name : kFixtures) {
    const auto model = testing::runtime_fixture(name);
    for (const auto& rec : model->recognizers) {
      const auto& def = rec.definition();
      ++fixture_mirons;
      for (const auto& sample : core::export_training_data({def})) {
        const auto results = core::recognize(sample.sentence, model->recognizers, def.direction);
        const bool ok = std::any_of(results.begin(), results.end(),
                                    [&](const auto& r) { return r.intent == def.name && r.slots == sample.slots; });
        ++checked;
        if (!ok && failed++ == 0) first_failure = def.name + ": \"" + sample.sentence + "\"";
      }
    }
  }
  // 200 random templates of depth <= 4; 1,000 random complete bindings spread over them.
  testing::RandomTemplateGenerator gen(20240601, 4);
  std::size_t bindings = 0;
  for (int i = 0; i < 200; ++i) {
    const auto def = gen.definition("r" + std::to_string(i));
    const core::Recognizer rec(def);
    for (int b = 0; b < 5; ++b, ++bindings) {
      for (const auto& e : core::expand_detailed(def, gen.complete_bindings(def))) {
        const auto m = rec.match(core::normalize_utterance(e.text));
        ++checked;
        if ((!m || m->intent != def.name || m->slots != e.slots) && failed++ == 0) {
          first_failure = def.name + ": \"" + e.text + "\"";
        }
      }
    }
  }
  std::ostringstream d;
  d << checked << " expansions (" << fixture_mirons << " fixture Mirons, 200 random templates, " << bindings
    << " bindings), " << failed << " not recognized back";
  if (failed) d << "; first: " << first_failure;
  return {failed == 0 && bindings == 1000, d.str()};
}

Outcome say_hello_six() {
  const auto model = testing::runtime_fixture("greeting");
  const auto* def = model->find_miron("say_Hello");
  std::vector<std::string> all;
  for (const char* phase : {"morning", "afternoon", "evening", "night"}) {
    for (const auto& s : core::expand(*def, {{"phaseOfDay", phase}})) {
      if (std::find(all.begin(), all.end(), s) == all.end()) all.push_back(s);
    }
  }
  const std::set<std::string> got(all.begin(), all.end());
  const std::set<std::string> want{"Hi", "Hello", "Good morning", "Good afternoon", "Good evening", "Good night"};
  // Per binding, the expansion list itself must not repeat a phrase.
  bool duplicates = false;
  for (const char* phase : {"morning", "night"}) {
    const auto one = core::expand(*def, {{"phaseOfDay", phase}});
    duplicates = duplicates || std::set<std::string>(one.begin(), one.end()).size() != one.size();
  }
  std::string list;
  for (const auto& s : all) list += (list.empty() ? "" : ", ") + s;
  return {got == want && all.size() == 6 && !duplicates, std::to_string(all.size()) + " phrases: " + list};
}

Outcome partial_train() {
  const auto model = testing::runtime_fixture("train");
  const auto results = core::recognize("I am looking for a train to Lyon", model->recognizers, core::Direction::outer);
  if (results.size() != 1) return {false, std::to_string(results.size()) + " matches"};
  const auto& r = results[0];
  const bool ok = r.intent == "request_train_connection" && r.slots == core::Bindings{{"Destination", "Lyon"}};
  std::string slots;
  for (const auto& [k, v] : r.slots) slots += k + "=" + v + " ";
  return {ok, "intent " + r.intent + ", slots " + slots};
}

Outcome engine_oracle() {
  std::mt19937_64 rng(500500);
  std::size_t steps = 0, mismatches = 0, activations = 0, contested = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = testing::random_model(rng, 20, 4);
    const auto r = testing::compare_with_oracle(m, 1000 + i, 50);
    steps += r.steps;
    mismatches += r.mismatches;
    activations += r.activations;
    contested += r.contested;
  }
  std::ostringstream d;
  d << "500 models, " << steps << " steps, " << mismatches << " mismatching, " << activations << " activations, "
    << contested << " contested steps";
  return {mismatches == 0 && steps == 500 * 50 && contested > 0, d.str()};
}

Outcome wta_uniformity() {
  std::ostringstream d;
  bool ok = true;
  double worst = 0;
  for (int t : {2, 3, 5}) {
    std::ostringstream src;
    src << "state busy\nmiron go { template \"go\" }\nrule pred {\n  when heard go\n  then set busy true\n}\n";
    for (int j = 0; j < t; ++j) {
      src << "rule succ" << j << " {\n  when after pred and heard go\n  then set busy false\n}\n";
    }
    auto lowered = compiler::lower_model(compiler::parse_model(src.str()));
    const auto& dict = lowered.dictionary;
    engine::EngineParams p;
    p.rng_seed = 77 + t;
    engine::Stepper s(std::make_shared<engine::WeightSet>(lowered.weights), p);
    const auto c = facts(dict, {"heard outer go"});
    s.step(c);
    std::vector<int> counts(t, 0);
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
      const auto& out = s.step(c);
      int selected = 0;
      for (int j = 0; j < t; ++j) {
        if (out.r_next[dict.rule_by_label("succ" + std::to_string(j))->or_index]) {
          ++counts[j];
          ++selected;
        }
      }
      ok = ok && selected == 1;
    }
    d << "t=" << t << ":";
    for (int j = 0; j < t; ++j) {
      const double f = static_cast<double>(counts[j]) / trials;
      worst = std::max(worst, std::abs(f - 1.0 / t));
      d << " " << std::round(f * 1000) / 10 << "%";
    }
    d << "; ";
  }
  d << "max deviation " << std::round(worst * 1000) / 10 << " points";
  return {ok && worst <= 0.03, d.str()};
}

Outcome inhibition_dominance() {
  engine::EngineParams p;
  std::size_t rows = 0, cases = 0, wrong = 0;
  for (int k = 1; k <= 3; ++k) {
    for (int signs = 0; signs < (1 << k); ++signs) {
      std::vector<engine::SparseMatrix::Entry> orw;
      engine::WeightSet w;
      std::vector<engine::SparseMatrix::Entry> cond;
      for (int i = 0; i < k; ++i) {
        cond.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), {1, 1}});
        orw.push_back({0, static_cast<std::uint32_t>(i), {(signs >> i) & 1 ? -1 : 1, 1}});
      }
      w.w_cond = engine::SparseMatrix(k, k, cond);
      w.w_rule = engine::SparseMatrix(k, 1, {});
      w.w_or = engine::SparseMatrix(1, k, orw);
      w.w_act = engine::SparseMatrix(1, 1, {{0, 0, {1, 1}}});
      ++rows;
      for (int input = 0; input < (1 << k); ++input) {
        engine::Binary x(k);
        bool inhibited = false, positive = false;
        for (int i = 0; i < k; ++i) {
          x[i] = (input >> i) & 1;
          const bool neg = (signs >> i) & 1;
          inhibited = inhibited || (x[i] && neg);
          positive = positive || (x[i] && !neg);
        }
        ++cases;
        wrong += engine::or_layer(x, w, p)[0] != (!inhibited && positive ? 1 : 0);
      }
    }
  }
  return {wrong == 0, std::to_string(rows) + " sign patterns, " + std::to_string(cases) + " input cases, " +
                          std::to_string(wrong) + " wrong"};
}

Outcome rule_107() {
  runtime::Session s(testing::runtime_fixture("greeting"), runtime::builtin_registry(testing::fixture_config()), {107});
  std::vector<std::uint64_t> greet_steps;
  s.set_observer([&](const runtime::EngineEvent& e) {
    if (e.kind == "rule_fired" && e.detail["rule"] == "greet") greet_steps.push_back(e.detail["step"]);
  });
  s.start();
  const bool armed = s.snapshot().working_memory.at("greetingsExpected") == "activated";
  s.ingest_utterance("Hello");
  const auto first = s.tick();
  const auto def = s.model().find_miron("say_Hello");
  const auto allowed = core::expand(*def, {{"phaseOfDay", "morning"}});
  const bool one_greeting = first.size() == 1 && first[0].intent == "say_Hello" &&
                            std::find(allowed.begin(), allowed.end(), first[0].text) != allowed.end();
  const auto snap = s.snapshot();
  const bool flipped = snap.working_memory.at("greetingsExpected") == "inhibited";
  // Active for exactly one step, and the engine ran at least one step after it.
  const bool self_off = greet_steps.size() == 1 && snap.step > greet_steps[0] + 1 && snap.active_rules.empty();
  s.ingest_utterance("Hello");
  const bool ignored = s.tick().empty() && greet_steps.size() == 1;
  std::ostringstream d;
  d << "armed=" << armed << " greeting=\"" << (first.empty() ? "" : first[0].text) << "\" flipped=" << flipped
    << " self_deactivated=" << self_off << " second_ignored=" << ignored;
  return {armed && one_greeting && flipped && self_off && ignored, d.str()};
}

Outcome inner_speech_chain() {
  runtime::Session s(testing::runtime_fixture("inner_speech"), runtime::builtin_registry(testing::fixture_config("10:30")),
                     {42});
  s.ingest_utterance("what time is it?");
  const auto out = s.tick();  // a single tick call
  std::vector<std::string> dirs;
  for (const auto& r : s.transcript()) dirs.push_back(r.dir);
  const bool chain = dirs == std::vector<std::string>{"in", "inner", "action", "out"} &&
                     s.transcript()[2].payload["action"] == "clock";
  const bool answer = out.size() == 1 && out[0].intent == "tell_time" && out[0].text.find("10:30") != std::string::npos;
  const auto snap = s.snapshot();
  const auto var = snap.named_entities.find("currentTime");
  const bool written = var != snap.named_entities.end() && var->second == "10:30";
  std::string fired;
  for (const auto& r : snap.fired_rules) fired += (fired.empty() ? "" : ",") + r;
  return {chain && answer && written && snap.fired_rules.size() == 3,
          "transcript in -> inner -> action(clock) -> out, fired " + fired + ", currentTime=" +
              (var == snap.named_entities.end() ? std::string("?") : var->second) + ", answer \"" +
              (out.empty() ? std::string() : out[0].text) + "\""};
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> script = {
      {"visitor detected", "presence"}, {"what time is it?", "speech"}, {"hmm", "speech"},
      {"call me Nakamura", "speech"},   {"I'm from Globex", "speech"},  {"visitor left", "presence"}};
  auto run = [&](std::uint64_t seed) {
    runtime::Session s(testing::runtime_fixture("receptionist"), runtime::builtin_registry(testing::fixture_config()),
                       {seed});
    s.start();
    for (const auto& [text, modality] : script) {
      s.ingest_utterance(text, modality);
      s.tick();
    }
    return s.transcript_jsonl();
  };
  bool same = true;
  for (std::uint64_t seed : {1, 2, 99}) same = same && run(seed) == run(seed);

  bool artifacts = true;
  std::size_t files = 0;
  for (const auto& name : kFixtures) {
    const auto a = compiler::build_artifacts(compiler::parse_model(testing::read_text(testing::model_path(name))));
    const auto dir1 = fs::temp_directory_path() / ("miron_accept_" + name + "_1");
    const auto dir2 = fs::temp_directory_path() / ("miron_accept_" + name + "_2");
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    const auto first = compiler::emit_artifacts(a, dir1);
    compiler::emit_artifacts(compiler::load_artifacts(dir1), dir2);
    for (const auto& p : first) {
      ++files;
      artifacts = artifacts && testing::read_text(p) == testing::read_text(dir2 / p.filename());
    }
  }
  return {same && artifacts, std::string("transcripts ") + (same ? "byte-identical" : "DIFFER") + " over 3 seeds; " +
                                 std::to_string(files) + " artifact files " +
                                 (artifacts ? "byte-identical" : "DIFFER") + " after emit -> load -> emit"};
}

Outcome receptionist_suite() {
  const auto out_dir = fs::temp_directory_path() / "miron_accept_receptionist";
  fs::remove_all(out_dir);
  const auto model = testing::model_path("receptionist").string();
  const auto scenarios = (testing::source_dir() / "models/receptionist/scenarios").string();
  auto call = [](std::vector<std::string> args, std::string& captured) {
    std::vector<const char*> argv{"miron"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in;
    std::ostringstream out, err;
    const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), in, out, err);
    captured = out.str() + err.str();
    return code;
  };
  std::string log;
  if (call({"compile", model, "-o", out_dir.string()}, log) != 0) return {false, "compile failed: " + log};
  if (!log.empty() && log.find("warning") != std::string::npos) return {false, "diagnostics: " + log};
  const int code = call({"simulate", scenarios, "--artifacts", out_dir.string(), "--quiet"}, log);

  std::size_t total = 0, passed = 0;
  std::set<std::string> names;
  std::istringstream lines(log);
  for (std::string line; std::getline(lines, line);) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || j.value("type", "") != "summary") continue;
    ++total;
    passed += j["pass"].get<bool>();
    names.insert(j["name"].get<std::string>());
  }
  bool depths = true;
  for (int k = 1; k <= 4; ++k) depths = depths && names.count("recovery_depth" + std::to_string(k));
  std::ostringstream d;
  d << passed << "/" << total << " scenarios passed, exit " << code
    << (depths ? ", all four recovery depths covered" : ", MISSING recovery depths");
  return {code == 0 && total >= 10 && passed == total && depths, d.str()};
}

}  // namespace

int main() {
  criterion("mirror round-trip", 30, mirror_round_trip);
  criterion("say_Hello expansion", 0, say_hello_six);
  criterion("partial-template recognition", 0, partial_train);
  criterion("engine-oracle equivalence", 60, engine_oracle);
  criterion("WTA uniformity", 0, wta_uniformity);
  criterion("inhibition dominance", 0, inhibition_dominance);
  criterion("rule-107 scenario", 0, rule_107);
  criterion("inner-speech chain", 0, inner_speech_chain);
  criterion("determinism and artifact round-trip", 0, determinism);
  criterion("receptionist demo", 10, receptionist_suite);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
