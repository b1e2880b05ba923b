#include "miron/sim/runner.hpp"

#include "miron/core/recognizer.hpp"

#include <algorithm>

namespace miron::sim {

using nlohmann::json;

namespace {

std::uint64_t user_seed(std::uint64_t seed) {
  std::uint64_t z = seed ^ 0x5deece66dULL;
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  return z ^ (z >> 33);
}

std::vector<std::string> recognized_intents(const runtime::RuntimeModel& m, const std::string& text) {
  std::vector<std::string> out;
  // No modality filter: outputs may be on screen or other channels.
  for (const auto& r : core::recognize(text, m.recognizers, core::Direction::outer)) out.push_back(r.intent);
  return out;
}

json outputs_json(const std::vector<runtime::EmittedOutput>& outs) {
  json a = json::array();
  for (const auto& o : outs) a.push_back({{"text", o.text}, {"intent", o.intent}});
  return a;
}

}  // namespace

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
}

std::string Report::to_jsonl() const {
  std::string out = json{{"type", "scenario"}, {"name", scenario}, {"seed", seed}}.dump() + "\n";
  for (const auto& c : checks) {
    json j = {{"type", "check"}, {"kind", c.kind}, {"line", c.line}, {"pass", c.pass}, {"description", c.description}};
    if (!c.detail.is_null()) j["detail"] = c.detail;
    out += j.dump() + "\n";
  }
  for (const auto& r : transcript) {
    json j = r.to_json();
    j["type"] = "transcript";
    out += j.dump() + "\n";
  }
  out += json{{"type", "summary"},
              {"name", scenario},
              {"checks", checks.size()},
              {"failures", failures()},
              {"pass", passed()}}
             .dump() +
         "\n";
  return out;
}

Report run_scenario(const Scenario& sc, std::shared_ptr<const runtime::RuntimeModel> model,
                    runtime::InternalActionRegistry registry, runtime::SessionOptions options) {
  Report report;
  report.scenario = sc.name;
  report.seed = sc.seed;
  options.seed = sc.seed;
  runtime::Session session(model, std::move(registry), options);
  core::Rng user_rng(user_seed(sc.seed));

  std::vector<runtime::EmittedOutput> window;
  std::size_t cursor = 0;  // expectations consume the window in order
  std::size_t total_outputs = 0;

  auto run_tick = [&](auto&& body, int line) {
    try {
      window = body();
    } catch (const runtime::IterationLimitExceeded& e) {
      window.clear();
      report.checks.push_back({"engine", line, false, e.what(), json{{"trace", e.trace()}}});
    }
    cursor = 0;
    total_outputs += window.size();
  };

  run_tick([&] { return session.start(); }, 0);

  for (const auto& [step, line] : sc.steps) {
    if (const auto* u = std::get_if<FixedUtterance>(&step)) {
      run_tick(
          [&] {
            session.ingest_utterance(u->text, u->modality);
            return session.tick();
          },
          line);
    } else if (const auto* p = std::get_if<ProduceAs>(&step)) {
      const auto* def = sc.find_user_miron(p->miron);
      std::string text;
      try {
        text = core::produce(*def, p->bindings, p->criterion, &user_rng, options.expansion_cap);
      } catch (const core::ExpansionError& e) {
        report.checks.push_back({"mirror", line, false, "user as " + p->miron + ": " + e.what(), {}});
        continue;
      }
      std::vector<core::RecognitionResult> results;
      run_tick(
          [&] {
            results = session.ingest_utterance(text, def->modality);
            return session.tick();
          },
          line);
      if (model->find_miron(p->miron)) {
        // Compare against the slots this particular expansion actually carries.
        core::Bindings expected;
        for (const auto& x : core::expand_detailed(*def, p->bindings, options.expansion_cap)) {
          if (x.text == text) expected = x.slots;
        }
        const bool closed = std::any_of(results.begin(), results.end(),
                                        [&](const auto& r) { return r.intent == p->miron && r.slots == expected; });
        report.checks.push_back({"mirror", line, closed, "system recognizes \"" + text + "\" as " + p->miron, {}});
      }
    } else {
      const auto& e = std::get<ExpectOutput>(step);
      Check c{"expect", line, false, "", json{{"outputs", outputs_json(window)}}};
      if (e.kind == ExpectOutput::Kind::none) {
        c.description = "expect none";
        c.pass = window.empty();
      } else {
        c.description = e.kind == ExpectOutput::Kind::text ? "expect text " + model::quote(e.value) : "expect " + e.value;
        for (std::size_t i = cursor; i < window.size() && !c.pass; ++i) {
          if (e.kind == ExpectOutput::Kind::text) {
            c.pass = core::normalize_utterance(window[i].text) == core::normalize_utterance(e.value);
          } else {
            const auto intents = recognized_intents(*model, window[i].text);
            c.pass = std::find(intents.begin(), intents.end(), e.value) != intents.end();
          }
          if (c.pass) cursor = i + 1;
        }
      }
      report.checks.push_back(std::move(c));
    }
  }

  const auto snap = session.snapshot();
  for (const auto& a : sc.assertions) {
    Check c{"assert", a.line, false, a.describe(), {}};
    switch (a.kind) {
      case Assertion::Kind::state: {
        const auto it = snap.working_memory.find(a.name);
        const std::optional<std::string> actual =
            it == snap.working_memory.end() ? std::nullopt
                                            : std::optional<std::string>(it->second == "activated" ? "true" : "false");
        c.pass = actual == a.value;
        c.detail = {{"actual", actual.value_or("unset")}};
        break;
      }
      case Assertion::Kind::variable: {
        const auto it = snap.named_entities.find(a.name);
        const std::optional<std::string> actual =
            it == snap.named_entities.end() ? std::nullopt : std::optional<std::string>(it->second);
        c.pass = actual == a.value;
        c.detail = {{"actual", actual ? json(*actual) : json(nullptr)}};
        break;
      }
      case Assertion::Kind::outbound:
        c.pass = session.outbound_count() == a.count;
        c.detail = {{"actual", session.outbound_count()}};
        break;
      case Assertion::Kind::outputs:
        c.pass = total_outputs == a.count;
        c.detail = {{"actual", total_outputs}};
        break;
      case Assertion::Kind::transcript_contains: {
        const std::string needle = a.value.value_or("");
        c.pass = std::any_of(session.transcript().begin(), session.transcript().end(), [&](const auto& r) {
          for (const char* key : {"text", "message"}) {
            if (r.payload.contains(key) && r.payload[key].is_string() &&
                r.payload[key].template get<std::string>().find(needle) != std::string::npos) {
              return true;
            }
          }
          return false;
        });
        break;
      }
    }
    report.checks.push_back(std::move(c));
  }
  report.transcript = session.transcript();
  return report;
}

Report run_scenario(const Scenario& sc, std::shared_ptr<const runtime::RuntimeModel> model, runtime::RuntimeConfig base) {
  if (sc.clock) base.clock = sc.clock;
  if (sc.kv_file) base.kv_file = sc.kv_file;
  base.seed = sc.seed;
  auto registry = runtime::builtin_registry(base);
  return run_scenario(sc, std::move(model), std::move(registry), runtime::SessionOptions::from(base));
}

}  // namespace miron::sim
