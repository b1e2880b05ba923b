#include "miron/service/server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <condition_variable>
#include <deque>
#include <stdexcept>

namespace miron::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

ListenAddress parse_listen(std::string_view text) {
  ListenAddress a;
  std::string_view host;
  std::string_view port = text;
  if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
    host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  a.host = host.empty() || host == "localhost" ? "127.0.0.1" : std::string(host);
  try {
    std::size_t used = 0;
    const unsigned long p = std::stoul(std::string(port), &used);
    if (used != port.size() || p > 65535) throw std::invalid_argument("range");
    a.port = static_cast<unsigned short>(p);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad listen address '" + std::string(text) + "' (expected host:port)");
  }
  return a;
}

namespace {

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, std::shared_ptr<SessionHub> hub) : ws_(std::move(socket)), hub_(std::move(hub)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(req, beast::bind_front_handler(&WsConnection::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (!ec) do_read();
  }

  void do_read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    const std::string frame = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    std::weak_ptr<WsConnection> weak = shared_from_this();
    // Frames of one connection are handled one after another on its strand.
    hub_->handle_frame(frame, [weak](const ServerMessage& m) {
      if (auto self = weak.lock()) self->send(to_json(m).dump());
    });
    do_read();
  }

  void send(std::string text) {
    net::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
      self->outbox_.push_back(std::move(text));
      if (self->outbox_.size() == 1) self->do_write();
    });
  }

  void do_write() {
    ws_.async_write(net::buffer(outbox_.front()), beast::bind_front_handler(&WsConnection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    outbox_.pop_front();
    if (!outbox_.empty()) do_write();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  std::shared_ptr<SessionHub> hub_;
};

http::response<http::string_body> respond(const http::request<http::string_body>& req, const SessionHub& hub) {
  auto reply = [&](http::status status, const json& body) {
    http::response<http::string_body> res{status, req.version()};
    res.set(http::field::content_type, "application/json");
    res.keep_alive(req.keep_alive());
    res.body() = body.dump() + "\n";
    res.prepare_payload();
    return res;
  };
  if (req.method() != http::verb::get) return reply(http::status::method_not_allowed, {{"error", "GET only"}});
  const auto target = req.target();
  if (target == "/health") return reply(http::status::ok, {{"status", "ok"}, {"sessions", hub.session_count()}});
  if (target == "/models") return reply(http::status::ok, hub.models_json());
  return reply(http::status::not_found, {{"error", "not found"}});
}

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, std::shared_ptr<SessionHub> hub) : stream_(std::move(socket)), hub_(std::move(hub)) {}

  void run() { net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpConnection::do_read, shared_from_this())); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) return close();
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      std::make_shared<WsConnection>(stream_.release_socket(), hub_)->run(std::move(req_));
      return;
    }
    auto res = std::make_shared<http::response<http::string_body>>(respond(req_, *hub_));
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
      if (wec) return;
      if (res->need_eof()) return self->close();
      self->do_read();
    });
  }

  void close() {
    beast::error_code ignored;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<SessionHub> hub_;
};

}  // namespace

struct Server::Impl {
  std::shared_ptr<SessionHub> hub;
  ListenAddress address;
  std::size_t threads;
  std::chrono::milliseconds reap_interval;
  net::io_context ioc;
  tcp::acceptor acceptor{net::make_strand(ioc)};
  net::steady_timer reaper{ioc};
  std::vector<std::thread> workers;
  std::mutex mutex;
  std::condition_variable stopped_cv;
  bool stopped = false;
  unsigned short bound_port = 0;

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpConnection>(std::move(socket), hub)->run();
      if (acceptor.is_open()) accept();
    });
  }

  void schedule_reap() {
    reaper.expires_after(reap_interval);
    reaper.async_wait([this](beast::error_code ec) {
      if (ec) return;
      hub->reap_idle();
      schedule_reap();
    });
  }
};

Server::Server(std::shared_ptr<SessionHub> hub, ListenAddress address, std::size_t threads,
               std::chrono::milliseconds reap_interval)
    : impl_(std::make_unique<Impl>()) {
  impl_->hub = std::move(hub);
  impl_->address = std::move(address);
  impl_->threads = threads ? threads : std::max(2u, std::thread::hardware_concurrency());
  impl_->reap_interval = reap_interval;
}

Server::~Server() { stop(); }

void Server::start() {
  auto& i = *impl_;
  const tcp::endpoint endpoint{net::ip::make_address(i.address.host), i.address.port};
  i.acceptor.open(endpoint.protocol());
  i.acceptor.set_option(net::socket_base::reuse_address(true));
  i.acceptor.bind(endpoint);
  i.acceptor.listen(net::socket_base::max_listen_connections);
  i.bound_port = i.acceptor.local_endpoint().port();
  i.accept();
  i.schedule_reap();
  for (std::size_t t = 0; t < i.threads; ++t) i.workers.emplace_back([&i] { i.ioc.run(); });
}

void Server::wait() {
  std::unique_lock lock(impl_->mutex);
  impl_->stopped_cv.wait(lock, [&] { return impl_->stopped; });
}

void Server::stop() {
  auto& i = *impl_;
  {
    std::lock_guard lock(i.mutex);
    if (i.stopped) return;
    i.stopped = true;
  }
  net::post(i.ioc, [&i] {
    beast::error_code ignored;
    i.acceptor.close(ignored);
    i.reaper.cancel();
  });
  i.ioc.stop();
  for (auto& w : i.workers) {
    if (w.joinable()) w.join();
  }
  i.stopped_cv.notify_all();
}

unsigned short Server::port() const { return impl_->bound_port; }

}  // namespace miron::service
