#pragma once

#include "miron/service/hub.hpp"

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace miron::service {

struct ListenAddress {
  std::string host = "127.0.0.1";
  unsigned short port = 8080;
};

/// "host:port", ":port" or "port"; "localhost" and an empty host map to 127.0.0.1.
ListenAddress parse_listen(std::string_view text);

/// WebSocket endpoint (any path) carrying the JSON wire protocol, plus GET /health and
/// GET /models on the same port.
class Server {
 public:
  Server(std::shared_ptr<SessionHub> hub, ListenAddress address, std::size_t threads = 0,
         std::chrono::milliseconds reap_interval = std::chrono::seconds(30));
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts the worker threads; returns once the port is bound.
  void start();
  /// Blocks until stop() is called from another thread (or a signal handler thread).
  void wait();
  void stop();
  /// The bound port (useful with port 0).
  unsigned short port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace miron::service
