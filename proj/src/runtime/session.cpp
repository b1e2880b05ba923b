#include "miron/runtime/session.hpp"

#include <algorithm>

namespace miron::runtime {

using nlohmann::json;

namespace {

engine::EngineParams params_for(const RuntimeModel& m, std::uint64_t seed) {
  engine::EngineParams p = m.artifacts.params;
  p.rng_seed = seed;
  return p;
}

// Separate stream for production choices so WTA draws do not shift utterance choices.
std::uint64_t production_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string join_trace(const std::vector<std::string>& rules) {
  std::string s;
  for (const auto& r : rules) s += (s.empty() ? "" : ", ") + r;
  return s.empty() ? "(none)" : s;
}

}  // namespace

IterationLimitExceeded::IterationLimitExceeded(std::size_t limit, std::vector<std::string> trace)
    : std::runtime_error("tick did not settle within " + std::to_string(limit) + " engine steps"),
      trace_(std::move(trace)) {}

json StateSnapshot::to_json() const {
  return {{"step", step},
          {"active_rules", active_rules},
          {"fired_rules", fired_rules},
          {"working_memory", working_memory},
          {"named_entities", named_entities},
          {"conditions", conditions},
          {"actions", actions}};
}

Session::Session(std::shared_ptr<const RuntimeModel> model, InternalActionRegistry registry, SessionOptions options)
    : model_(std::move(model)),
      registry_(std::move(registry)),
      options_(options),
      stepper_(model_->weights, params_for(*model_, options.seed)),
      rng_(production_seed(options.seed)),
      last_conditions_(model_->dictionary().conditions.size(), 0),
      last_actions_(model_->dictionary().actions.size(), 0) {}

void Session::record(std::string dir, json payload) {
  transcript_.push_back({stepper_.steps(), std::move(dir), std::move(payload)});
}

void Session::notify(std::string kind, json detail) {
  if (observer_) observer_(EngineEvent{std::move(kind), std::move(detail)});
}

void Session::write_entity(const std::string& name, const std::string& value) {
  if (value.empty()) ne_.erase(name);
  else ne_[name] = value;
}

std::vector<EmittedOutput> Session::start() {
  queue_.push_back({Event::Kind::perceived, std::string(model::kSessionStart), model::Direction::outer, {}});
  return tick();
}

std::vector<core::RecognitionResult> Session::ingest_utterance(std::string_view text, std::string_view modality) {
  auto results = core::recognize(text, model_->recognizers, model::Direction::outer, modality);
  json intents = json::array();
  for (const auto& r : results) intents.push_back(r.intent);
  record("in", {{"text", core::normalize_utterance(text)}, {"modality", modality}, {"intents", intents}});
  if (results.empty()) {
    queue_.push_back({Event::Kind::perceived, std::string(model::kNoMatch), model::Direction::outer, {}});
  }
  for (const auto& r : results) ingest_result(r);
  return results;
}

void Session::ingest_result(const core::RecognitionResult& result, model::Direction channel) {
  if (channel == model::Direction::outer) {
    for (const auto& [k, v] : result.data_slots) write_entity(k, v);
    for (const auto& [k, v] : result.slots) write_entity(k, v);
    queue_.push_back({Event::Kind::perceived, result.intent, channel, {}});
    return;
  }
  core::Bindings writes = result.data_slots;
  for (const auto& [k, v] : result.slots) writes[k] = v;
  queue_.push_back({Event::Kind::perceived, result.intent, channel, std::move(writes)});
}

engine::Binary Session::build_conditions(const std::set<std::pair<std::string, model::Direction>>& perceived,
                                         const std::set<std::string>& completed, const std::set<std::string>& failed) {
  const auto& atoms = model_->conditions;
  engine::Binary c(atoms.size(), 0);
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    c[n] = std::visit(
        [&](const auto& a) -> bool {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, model::MironPerceived>) {
            return perceived.count({a.name, a.channel}) > 0;
          } else if constexpr (std::is_same_v<T, model::MironCompleted>) {
            return completed.count(a.name) > 0;
          } else if constexpr (std::is_same_v<T, model::ActionFailed>) {
            return failed.count(a.name) > 0;
          } else if constexpr (std::is_same_v<T, model::VariableState>) {
            const auto now = ne_.find(a.name);
            const auto before = prev_ne_.find(a.name);
            const bool filled = now != ne_.end();
            const bool changed = filled != (before != prev_ne_.end()) || (filled && now->second != before->second);
            switch (a.state) {
              case model::VarState::filled: return filled;
              case model::VarState::empty: return !filled;
              case model::VarState::changed: return changed;
              case model::VarState::unchanged: return !changed;
            }
            return false;
          } else {
            const auto it = wm_.find(a.name);
            return it != wm_.end() && it->second == a.level;
          }
        },
        atoms[n]);
  }
  prev_ne_ = ne_;
  return c;
}

std::vector<EmittedOutput> Session::tick() {
  std::vector<EmittedOutput> outputs;
  std::vector<std::string> trace;
  fired_.clear();
  std::size_t iterations = 0;
  bool state_changed = false;
  const auto& dict = model_->dictionary();

  while (!queue_.empty() || stepper_.any_active() || state_changed) {
    if (iterations == options_.max_iterations) {
      stepper_.reset();
      queue_.clear();
      notify("iteration_limit", {{"trace", trace}});
      throw IterationLimitExceeded(options_.max_iterations, trace);
    }
    ++iterations;

    std::set<std::pair<std::string, model::Direction>> perceived;
    std::set<std::string> completed, failed;
    const core::Bindings before = ne_;
    while (!queue_.empty()) {
      Event e = std::move(queue_.front());
      queue_.pop_front();
      for (const auto& [k, v] : e.writes) write_entity(k, v);
      switch (e.kind) {
        case Event::Kind::perceived: perceived.emplace(e.name, e.channel); break;
        case Event::Kind::completed: completed.insert(e.name); break;
        case Event::Kind::failed: failed.insert(e.name); break;
      }
    }
    const auto c = build_conditions(perceived, completed, failed);
    const auto& out = stepper_.step(c);
    last_conditions_ = c;
    last_actions_ = out.actions;

    std::vector<std::string> active;
    for (std::size_t m = 0; m < out.r_next.size(); ++m) {
      if (!out.r_next[m]) continue;
      active.push_back(dict.rules[m].label);
      fired_.push_back(dict.rules[m].label);
      notify("rule_fired", {{"rule", dict.rules[m].label}, {"id", dict.rules[m].id}, {"step", stepper_.steps() - 1}});
    }
    trace.push_back("step " + std::to_string(stepper_.steps() - 1) + ": " + join_trace(active));

    const auto wm_before = wm_;
    execute(out.actions, outputs);
    state_changed = wm_ != wm_before || ne_ != before;
  }
  return outputs;
}

bool Session::execute(const engine::Binary& actions, std::vector<EmittedOutput>& outputs) {
  const auto& atoms = model_->actions;
  auto each = [&](auto&& pred, auto&& run) {
    for (std::size_t q = 0; q < atoms.size(); ++q) {
      if (actions[q] && pred(atoms[q])) run(atoms[q]);
    }
  };
  bool any = false;
  each([](const auto& a) { return std::holds_alternative<model::SetState>(a); },
       [&](const auto& a) {
         const auto& set = std::get<model::SetState>(a);
         if (set.level == model::WmLevel::reset) wm_.erase(set.name);
         else wm_[set.name] = set.level;
         any = true;
       });
  each([](const auto& a) { return std::holds_alternative<model::WriteVariable>(a); },
       [&](const auto& a) {
         const auto& w = std::get<model::WriteVariable>(a);
         if (w.value) {
           const core::Bindings snapshot = ne_;
           write_entity(w.name, model::interpolate(*w.value, [&](const std::string& n) {
                          const auto it = snapshot.find(n);
                          return it == snapshot.end() ? std::string() : it->second;
                        }));
         } else {
           ne_.erase(w.name);
         }
         any = true;
       });
  each([](const auto& a) { return std::holds_alternative<model::InvokeInternal>(a); },
       [&](const auto& a) {
         invoke(std::get<model::InvokeInternal>(a));
         any = true;
       });
  each([](const auto& a) {
         const auto* say = std::get_if<model::ProduceMiron>(&a);
         return say && say->channel == model::Direction::inner;
       },
       [&](const auto& a) {
         produce(std::get<model::ProduceMiron>(a), outputs);
         any = true;
       });
  each([](const auto& a) {
         const auto* say = std::get_if<model::ProduceMiron>(&a);
         return say && say->channel == model::Direction::outer;
       },
       [&](const auto& a) {
         produce(std::get<model::ProduceMiron>(a), outputs);
         any = true;
       });
  return any;
}

void Session::invoke(const model::InvokeInternal& call) {
  std::vector<std::string> args;
  for (const auto& arg : call.args) {
    if (arg.literal) {
      args.push_back(arg.text);
    } else {
      const auto it = ne_.find(arg.text);
      args.push_back(it == ne_.end() ? std::string() : it->second);
    }
  }
  json payload = {{"action", call.name}, {"args", args}};
  HandlerResult result;
  if (const Handler* h = registry_.find(call.name)) {
    try {
      result = (*h)(HandlerCall{call.name, args, ne_});
    } catch (const std::exception& e) {
      result = HandlerResult::failure(std::string("handler threw: ") + e.what());
    }
  } else {
    result = HandlerResult::failure("no handler registered");
  }

  if (result.error) {
    payload["status"] = "failed";
    payload["error"] = *result.error;
    record("action", payload);
    notify("action_failed", payload);
    queue_.push_back({Event::Kind::failed, call.name, model::Direction::outer, {}});
    return;
  }
  payload["status"] = "ok";
  if (!result.writes.empty()) payload["writes"] = result.writes;
  if (result.outbound) {
    payload["message"] = *result.outbound;
    ++outbound_;
    notify("outbound", {{"action", call.name}, {"message", *result.outbound}});
  }
  record("action", payload);
  queue_.push_back({Event::Kind::completed, call.name, model::Direction::outer, std::move(result.writes)});
}

void Session::produce(const model::ProduceMiron& say, std::vector<EmittedOutput>& outputs) {
  const auto* def = model_->find_miron(say.name);
  std::string text;
  std::string error;
  if (!def) {
    error = "unknown Miron";
  } else {
    core::Bindings bindings;
    for (const auto& slot : def->slots) {
      if (const auto it = ne_.find(slot.name); it != ne_.end()) bindings[slot.name] = it->second;
    }
    try {
      text = core::produce(*def, bindings, say.criterion, &rng_, options_.expansion_cap);
    } catch (const core::ExpansionError& e) {
      error = e.what();
    }
  }
  if (!error.empty()) {
    json payload = {{"action", model::to_string(model::ActionAtom{say})}, {"status", "failed"}, {"error", error}};
    record("action", payload);
    notify("action_failed", payload);
    queue_.push_back({Event::Kind::failed, say.name, model::Direction::outer, {}});
    return;
  }

  if (say.channel == model::Direction::outer) {
    record("out", {{"text", text}, {"intent", say.name}, {"modality", def->modality}});
    outputs.push_back({text, say.name, def->modality, stepper_.steps() - 1});
  } else {
    // Inner speech goes back through recognition exactly like an outside utterance.
    const auto results = core::recognize(text, model_->recognizers, model::Direction::inner);
    json intents = json::array();
    for (const auto& r : results) intents.push_back(r.intent);
    record("inner", {{"text", text}, {"intent", say.name}, {"recognized", intents}});
    notify("inner_speech", {{"text", text}, {"intent", say.name}, {"recognized", intents}});
    for (const auto& r : results) ingest_result(r, model::Direction::inner);
  }
  queue_.push_back({Event::Kind::completed, say.name, model::Direction::outer, {}});
}

StateSnapshot Session::snapshot() const {
  StateSnapshot s;
  const auto& dict = model_->dictionary();
  s.step = stepper_.steps();
  for (std::size_t m = 0; m < stepper_.rules().size(); ++m) {
    if (stepper_.rules()[m]) s.active_rules.push_back(dict.rules[m].label);
  }
  s.fired_rules = fired_;
  for (const auto& [name, level] : wm_) s.working_memory[name] = level == model::WmLevel::activated ? "activated" : "inhibited";
  s.named_entities = ne_;
  for (std::size_t n = 0; n < last_conditions_.size(); ++n) {
    if (last_conditions_[n]) s.conditions.push_back(dict.conditions[n]);
  }
  for (std::size_t q = 0; q < last_actions_.size(); ++q) {
    if (last_actions_[q]) s.actions.push_back(dict.actions[q]);
  }
  return s;
}

std::string Session::transcript_jsonl() const {
  std::string out;
  for (const auto& r : transcript_) out += r.to_json().dump() + "\n";
  return out;
}

}  // namespace miron::runtime
