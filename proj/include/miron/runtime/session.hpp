#pragma once

#include "miron/engine/network.hpp"
#include "miron/runtime/model.hpp"
#include "miron/runtime/registry.hpp"

#include <json.hpp>

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace miron::runtime {

struct SessionOptions {
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;
  std::size_t expansion_cap = 10'000;

  static SessionOptions from(const RuntimeConfig& c) { return {c.seed, c.max_iterations, c.expansion_cap}; }
};

/// Per-iteration record attached to IterationLimitExceeded: the rules active at each step.
class IterationLimitExceeded : public std::runtime_error {
 public:
  IterationLimitExceeded(std::size_t limit, std::vector<std::string> trace);
  const std::vector<std::string>& trace() const noexcept { return trace_; }

 private:
  std::vector<std::string> trace_;
};

struct EmittedOutput {
  std::string text;
  std::string intent;
  std::string modality;
  std::uint64_t step = 0;
  bool operator==(const EmittedOutput&) const = default;
};

struct StateSnapshot {
  std::uint64_t step = 0;
  std::vector<std::string> active_rules;  // after the last engine step
  std::vector<std::string> fired_rules;   // every activation of the last tick, in order
  std::map<std::string, std::string> working_memory;  // "activated" | "inhibited"
  std::map<std::string, std::string> named_entities;
  std::vector<std::string> conditions;  // condition lines high at the last step
  std::vector<std::string> actions;     // action lines high at the last step

  nlohmann::json to_json() const;
  bool operator==(const StateSnapshot&) const = default;
};

/// Live observation of a tick, for inspectors: `rule_fired`, `inner_speech`,
/// `action_failed`, `outbound`.
struct EngineEvent {
  std::string kind;
  nlohmann::json detail;
};

struct TranscriptRecord {
  std::uint64_t step = 0;
  std::string dir;  // in | out | inner | action
  nlohmann::json payload;

  nlohmann::json to_json() const { return {{"step", step}, {"dir", dir}, {"payload", payload}}; }
  bool operator==(const TranscriptRecord&) const = default;
};

class Session {
 public:
  Session(std::shared_ptr<const RuntimeModel> model, InternalActionRegistry registry, SessionOptions options = {});

  /// Raises the `_start` event and runs a tick (session-opening rules).
  std::vector<EmittedOutput> start();

  /// Recognizes `text` against the outer Mirons of `modality` and queues one event per
  /// match (or `_nomatch`). Slots and data slots go to the named-entity store.
  std::vector<core::RecognitionResult> ingest_utterance(std::string_view text, std::string_view modality = "speech");

  /// Queues a recognized Miron directly, as if a perceiver (or, on the inner channel, the
  /// system's own speech) had produced it.
  void ingest_result(const core::RecognitionResult& result, model::Direction channel = model::Direction::outer);

  /// Steps the engine until no events are queued, no rule is active and the previous
  /// step changed no stored state. Throws IterationLimitExceeded past max_iterations,
  /// after clearing the rule state and the queue.
  std::vector<EmittedOutput> tick();

  StateSnapshot snapshot() const;
  const std::vector<TranscriptRecord>& transcript() const { return transcript_; }
  std::string transcript_jsonl() const;
  std::size_t outbound_count() const { return outbound_; }
  const RuntimeModel& model() const { return *model_; }

  void set_observer(std::function<void(const EngineEvent&)> observer) { observer_ = std::move(observer); }

 private:
  struct Event {
    enum class Kind { perceived, completed, failed };
    Kind kind;
    std::string name;
    model::Direction channel = model::Direction::outer;
    core::Bindings writes;
  };

  void record(std::string dir, nlohmann::json payload);
  void notify(std::string kind, nlohmann::json detail);
  void write_entity(const std::string& name, const std::string& value);
  engine::Binary build_conditions(const std::set<std::pair<std::string, model::Direction>>& perceived,
                                  const std::set<std::string>& completed, const std::set<std::string>& failed);
  bool execute(const engine::Binary& actions, std::vector<EmittedOutput>& outputs);
  void produce(const model::ProduceMiron& say, std::vector<EmittedOutput>& outputs);
  void invoke(const model::InvokeInternal& call);

  std::shared_ptr<const RuntimeModel> model_;
  InternalActionRegistry registry_;
  SessionOptions options_;
  engine::Stepper stepper_;
  core::Rng rng_;
  std::map<std::string, model::WmLevel> wm_;
  core::Bindings ne_;
  core::Bindings prev_ne_;
  std::deque<Event> queue_;
  std::vector<TranscriptRecord> transcript_;
  std::vector<std::string> fired_;
  engine::Binary last_conditions_;
  engine::Binary last_actions_;
  std::size_t outbound_ = 0;
  std::function<void(const EngineEvent&)> observer_;
};

}  // namespace miron::runtime
