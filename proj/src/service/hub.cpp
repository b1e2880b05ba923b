#include "miron/service/hub.hpp"

#include "miron/compiler/artifacts.hpp"

#include <algorithm>

namespace miron::service {

std::vector<ServedModel> load_served_models(const std::filesystem::path& dir) {
  std::vector<ServedModel> out;
  auto load = [&](const std::filesystem::path& d) {
    out.push_back({d.filename().string(), runtime::make_runtime_model(compiler::load_artifacts(d))});
  };
  const auto canonical = std::filesystem::weakly_canonical(dir);
  if (compiler::is_artifact_dir(canonical)) {
    load(canonical);
    return out;
  }
  if (!std::filesystem::is_directory(canonical)) throw compiler::IoError("no such directory: " + dir.string());
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(canonical)) {
    if (e.is_directory() && compiler::is_artifact_dir(e.path())) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) load(d);
  if (out.empty()) throw compiler::IoError("no compiled models under " + dir.string());
  return out;
}

SessionHub::SessionHub(std::vector<ServedModel> models, runtime::RuntimeConfig config)
    : models_(std::move(models)), config_(std::move(config)) {}

json SessionHub::models_json() const {
  json a = json::array();
  for (const auto& m : models_) {
    const auto& d = m.model->dictionary();
    a.push_back({{"id", m.id},
                 {"mirons", m.model->artifacts.mirons.size()},
                 {"rules", d.rules.size()},
                 {"conditions", d.conditions.size()},
                 {"actions", d.actions.size()}});
  }
  return {{"models", a}};
}

std::size_t SessionHub::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionHub::handle_frame(std::string_view frame, const Sink& reply) {
  ClientMessage m;
  try {
    m = parse_client_message(frame);
  } catch (const BadMessage& e) {
    reply(ErrorMessage{ErrorCode::bad_message, e.what(), std::nullopt, std::nullopt, {}});
    return;
  }
  handle(m, reply);
}

std::shared_ptr<SessionHub::Entry> SessionHub::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionHub::handle(const ClientMessage& message, const Sink& reply) {
  if (const auto* c = std::get_if<CreateSession>(&message)) {
    create(*c, reply);
    return;
  }
  const std::string& id = std::visit(
      [](const auto& m) -> const std::string& {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, CreateSession>) {
          static const std::string none;
          return none;
        } else {
          return m.session;
        }
      },
      message);
  const auto entry = find(id);
  auto unknown = [&] {
    reply(ErrorMessage{ErrorCode::unknown_session, "no session '" + id + "'", id, std::nullopt, {}});
  };
  if (!entry) return unknown();

  std::lock_guard lock(entry->mutex);
  if (entry->closed) return unknown();
  entry->last_active = Clock::now();
  entry->sink = reply;
  if (const auto* u = std::get_if<UserUtterance>(&message)) {
    run_tick(*entry, reply, [&] {
      entry->session->ingest_utterance(u->text, u->modality);
      return entry->session->tick();
    });
  } else {
    reply(StateSnapshotMessage{entry->id, ++entry->seq, entry->session->snapshot().to_json()});
  }
}

void SessionHub::create(const CreateSession& m, const Sink& reply) {
  const ServedModel* served = nullptr;
  if (m.model_id) {
    const auto it = std::find_if(models_.begin(), models_.end(), [&](const auto& s) { return s.id == *m.model_id; });
    if (it != models_.end()) served = &*it;
  } else if (models_.size() == 1) {
    served = &models_.front();
  }
  if (!served) {
    reply(ErrorMessage{ErrorCode::bad_message,
                       m.model_id ? "unknown model '" + *m.model_id + "'" : std::string("model_id is required"),
                       std::nullopt, std::nullopt, {}});
    return;
  }

  auto entry = std::make_shared<Entry>();
  runtime::SessionOptions options = runtime::SessionOptions::from(config_);
  if (m.seed) options.seed = *m.seed;
  entry->session = std::make_unique<runtime::Session>(served->model, runtime::builtin_registry(config_), options);
  entry->model_id = served->id;
  entry->last_active = Clock::now();
  entry->sink = reply;
  {
    std::lock_guard lock(mutex_);
    entry->id = "s" + std::to_string(next_id_++);
    sessions_.emplace(entry->id, entry);
  }
  std::lock_guard lock(entry->mutex);
  reply(SessionCreated{entry->id, ++entry->seq, entry->model_id});
  run_tick(*entry, reply, [&] { return entry->session->start(); });
}

void SessionHub::run_tick(Entry& e, const Sink& reply,
                          const std::function<std::vector<runtime::EmittedOutput>()>& body) {
  e.session->set_observer([&](const runtime::EngineEvent& ev) {
    // The iteration limit is reported once, as the engine_fault error below.
    if (ev.kind != "iteration_limit") reply(EngineEventMessage{e.id, ++e.seq, ev.kind, ev.detail});
  });
  try {
    for (const auto& out : body()) reply(SystemUtterance{e.id, ++e.seq, out.text, out.intent, out.modality});
  } catch (const runtime::IterationLimitExceeded& ex) {
    reply(ErrorMessage{ErrorCode::engine_fault, ex.what(), e.id, ++e.seq, json{{"trace", ex.trace()}}});
  } catch (const std::exception& ex) {
    reply(ErrorMessage{ErrorCode::engine_fault, ex.what(), e.id, ++e.seq, {}});
  }
  e.session->set_observer(nullptr);
  reply(StateSnapshotMessage{e.id, ++e.seq, e.session->snapshot().to_json()});
}

std::size_t SessionHub::reap_idle(Clock::time_point now) {
  const auto timeout = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double, std::ratio<60>>(config_.idle_timeout_minutes));
  std::vector<std::shared_ptr<Entry>> idle;
  {
    std::lock_guard lock(mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock entry_lock(it->second->mutex, std::try_to_lock);
      // A session busy with a request is not idle.
      if (entry_lock.owns_lock() && now - it->second->last_active > timeout) {
        it->second->closed = true;
        idle.push_back(it->second);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (const auto& e : idle) {
    std::lock_guard lock(e->mutex);
    if (e->sink) {
      e->sink(EngineEventMessage{e->id, ++e->seq, "closed",
                                 {{"reason", "idle"}, {"idle_minutes", config_.idle_timeout_minutes}}});
    }
  }
  return idle.size();
}

}  // namespace miron::service
