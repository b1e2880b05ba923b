#pragma once

#include "miron/runtime/config.hpp"
#include "miron/runtime/session.hpp"
#include "miron/service/wire.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace miron::service {

struct ServedModel {
  std::string id;
  std::shared_ptr<const runtime::RuntimeModel> model;
};

/// `dir` is either one artifact directory (served under its directory name) or a directory
/// whose artifact subdirectories are each served under their own name.
std::vector<ServedModel> load_served_models(const std::filesystem::path& dir);

/// Receives the server messages of one request, in order. Must be callable from any thread.
using Sink = std::function<void(const ServerMessage&)>;

/// All sessions of a service, independent of the transport. Requests for one session are
/// processed one at a time and in arrival order; different sessions run in parallel.
class SessionHub {
 public:
  using Clock = std::chrono::steady_clock;

  SessionHub(std::vector<ServedModel> models, runtime::RuntimeConfig config);

  /// Parses and handles one client frame; malformed frames answer error{bad_message}.
  void handle_frame(std::string_view frame, const Sink& reply);
  void handle(const ClientMessage& message, const Sink& reply);

  /// Tears down sessions idle for longer than the configured timeout, sending each a final
  /// engine_event{closed} through the sink of its latest request. Returns how many closed.
  std::size_t reap_idle(Clock::time_point now = Clock::now());

  std::size_t session_count() const;
  const std::vector<ServedModel>& models() const { return models_; }
  json models_json() const;

 private:
  struct Entry {
    std::mutex mutex;
    std::string id;
    std::string model_id;
    std::unique_ptr<runtime::Session> session;
    std::uint64_t seq = 0;
    Clock::time_point last_active;
    Sink sink;
    bool closed = false;
  };

  void create(const CreateSession& m, const Sink& reply);
  std::shared_ptr<Entry> find(const std::string& id);
  void run_tick(Entry& e, const Sink& reply, const std::function<std::vector<runtime::EmittedOutput>()>& body);

  std::vector<ServedModel> models_;
  runtime::RuntimeConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace miron::service
