#pragma once

#include <sys/socket.h>

#include <atomic>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <filesystem>
#include <list>
#include <thread>

#include "logicsim/session_service.hpp"

// HTTP + WebSocket front end for SessionService.
//
//   POST /session                      create a session
//   POST /session/{id}/command         {"seq", "command"}
//   GET  /session/{id}/state
//   PUT  /session/{id}/circuit         body: .lgc text
//   GET  /session/{id}/circuit         -> .lgc text
//   GET  /session/{id}/table
//   POST /session/{id}/save/{name}
//   POST /session/{id}/load/{name}
//   GET  /ws                           WebSocket; one JSON request per text
//                                      frame, one JSON response per request
//
// Anything else is looked up in the UI directory when one is configured.

namespace logicsim {

namespace beast = boost::beast;
namespace http = boost::beast::http;
namespace websocket = boost::beast::websocket;
using tcp = boost::asio::ip::tcp;

inline http::status status_for(const nlohmann::json& response) {
  auto it = response.find("error");
  if (it == response.end()) return http::status::ok;
  const auto code = it->value("code", "");
  if (code == "unknown_session" || code == "unknown_name") return http::status::not_found;
  if (code == "out_of_order") return http::status::conflict;
  if (code == "too_many_inputs") return http::status::unprocessable_entity;
  if (code == "io_error") return http::status::internal_server_error;
  return http::status::bad_request;
}

inline std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

class Server {
 public:
  using Request = http::request<http::string_body>;
  using Response = http::response<http::string_body>;

  explicit Server(SessionService& service, std::optional<std::filesystem::path> ui_dir = std::nullopt)
      : service_(service), ui_dir_(std::move(ui_dir)), acceptor_(ioc_) {}

  ~Server() { stop(); }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and listens. Throws boost::system::system_error when the address
  /// cannot be bound (for example, the port is already in use).
  void listen(const std::string& host, unsigned short port) {
    tcp::endpoint ep(boost::asio::ip::make_address(host), port);
    acceptor_.open(ep.protocol());
    acceptor_.set_option(boost::asio::socket_base::reuse_address(true));
    acceptor_.bind(ep);
    acceptor_.listen();
    do_accept();
  }

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  /// Serves until stop() is called from another thread.
  void run() { ioc_.run(); }

  void start() {
    runner_ = std::thread([this] { run(); });
  }

  void stop() {
    if (stopped_.exchange(true)) return;
    boost::asio::post(ioc_, [this] {
      boost::system::error_code ec;
      acceptor_.close(ec);
    });
    ioc_.stop();
    if (runner_.joinable()) runner_.join();
    std::list<Connection> connections;
    {
      std::lock_guard lock(connections_mutex_);
      for (auto& c : connections_) {
        if (!c.done->load()) ::shutdown(c.fd, SHUT_RDWR);
      }
      connections.swap(connections_);
    }
    for (auto& c : connections) {
      if (c.thread.joinable()) c.thread.join();
    }
  }

  /// Routes one plain HTTP request. Exposed for in-process tests.
  Response route(const Request& req) {
    const std::string target(req.target());
    const auto path = target.substr(0, target.find('?'));
    std::vector<std::string> parts;
    for (std::size_t pos = 1; pos <= path.size();) {
      auto next = path.find('/', pos);
      if (next == std::string::npos) next = path.size();
      if (next > pos) parts.push_back(path.substr(pos, next - pos));
      pos = next + 1;
    }

    if (!parts.empty() && parts[0] == "session") {
      if (parts.size() == 1) {
        if (req.method() != http::verb::post) return text(req, http::status::method_not_allowed, "use POST\n");
        auto r = json(req, service_.handle({{"op", "create"}}));
        r.result(http::status::created);
        return r;
      }
      const auto& id = parts[1];
      if (parts.size() == 3 && parts[2] == "command" && req.method() == http::verb::post) {
        auto body = nlohmann::json::parse(req.body(), nullptr, false);
        if (body.is_discarded() || !body.is_object()) {
          return json(req, service_.handle(nlohmann::json("malformed")));
        }
        body["op"] = "command";
        body["session"] = id;
        return json(req, service_.handle(body));
      }
      if (parts.size() == 3 && parts[2] == "state" && req.method() == http::verb::get) {
        return json(req, service_.handle({{"op", "state"}, {"session", id}}));
      }
      if (parts.size() == 3 && parts[2] == "circuit") {
        if (req.method() == http::verb::get) {
          auto r = service_.handle({{"op", "circuit"}, {"session", id}});
          if (r.contains("error")) return json(req, r);
          return text(req, http::status::ok, r["text"].get<std::string>(), "text/plain; charset=utf-8");
        }
        if (req.method() == http::verb::put) {
          return json(req, service_.handle({{"op", "load"}, {"session", id}, {"text", req.body()}}));
        }
      }
      if (parts.size() == 3 && parts[2] == "table" && req.method() == http::verb::get) {
        nlohmann::json r;
        try {
          r = {{"session", id}, {"table", service_.truth_table(id)}};
        } catch (const service_error& e) {
          r = {{"error", e.to_json()}};
        }
        return json(req, r);
      }
      if (parts.size() == 4 && (parts[2] == "save" || parts[2] == "load") && req.method() == http::verb::post) {
        return json(req, service_.handle({{"op", parts[2]}, {"session", id}, {"name", parts[3]}}));
      }
      return text(req, http::status::not_found, "not found\n");
    }

    if (req.method() == http::verb::get && ui_dir_) return static_file(req, path);
    return text(req, http::status::not_found, "not found\n");
  }

 private:
  struct Connection {
    int fd = -1;
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  static Response text(const Request& req, http::status status, std::string body,
                       std::string_view type = "text/plain; charset=utf-8") {
    Response r{status, req.version()};
    r.set(http::field::content_type, std::string(type));
    r.keep_alive(req.keep_alive());
    r.body() = std::move(body);
    r.prepare_payload();
    return r;
  }

  static Response json(const Request& req, const nlohmann::json& body) {
    return text(req, status_for(body), body.dump(), "application/json");
  }

  Response static_file(const Request& req, std::string path) {
    if (path.empty() || path == "/") path = "/index.html";
    const std::filesystem::path rel = std::filesystem::path(path.substr(1)).lexically_normal();
    if (rel.empty() || rel.is_absolute() || *rel.begin() == "..") {
      return text(req, http::status::bad_request, "bad path\n");
    }
    const auto full = *ui_dir_ / rel;
    std::ifstream in(full, std::ios::binary);
    if (!in || std::filesystem::is_directory(full)) return text(req, http::status::not_found, "not found\n");
    std::ostringstream body;
    body << in.rdbuf();
    return text(req, http::status::ok, body.str(), mime_type(full));
  }

  void do_accept() {
    acceptor_.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
      if (ec) return;
      spawn(std::move(socket));
      do_accept();
    });
  }

  void spawn(tcp::socket socket) {
    std::lock_guard lock(connections_mutex_);
    connections_.remove_if([](Connection& c) {
      if (!c.done->load()) return false;
      c.thread.join();
      return true;
    });
    auto done = std::make_shared<std::atomic<bool>>(false);
    const int fd = socket.native_handle();
    connections_.push_back({fd, std::thread([this, done, s = std::move(socket)]() mutable {
                              serve_connection(std::move(s));
                              done->store(true);
                            }),
                            done});
  }

  void serve_connection(tcp::socket socket) {
    beast::flat_buffer buffer;
    boost::system::error_code ec;
    for (;;) {
      http::request_parser<http::string_body> parser;
      parser.body_limit(1 << 20);
      http::read(socket, buffer, parser, ec);
      if (ec) break;
      auto req = parser.release();
      if (websocket::is_upgrade(req)) {
        if (req.target() == "/ws") serve_websocket(std::move(socket), req);
        return;
      }
      auto res = route(req);
      http::write(socket, res, ec);
      if (ec || !res.keep_alive()) break;
    }
    socket.shutdown(tcp::socket::shutdown_send, ec);
  }

  void serve_websocket(tcp::socket socket, const Request& req) {
    websocket::stream<tcp::socket> ws(std::move(socket));
    boost::system::error_code ec;
    ws.read_message_max(1 << 20);
    ws.accept(req, ec);
    if (ec) return;
    for (;;) {
      beast::flat_buffer buffer;
      ws.read(buffer, ec);
      if (ec) return;
      auto reply = service_.handle_text(beast::buffers_to_string(buffer.data()));
      ws.text(true);
      ws.write(boost::asio::buffer(reply), ec);
      if (ec) return;
    }
  }

  SessionService& service_;
  std::optional<std::filesystem::path> ui_dir_;
  boost::asio::io_context ioc_;
  tcp::acceptor acceptor_;
  std::thread runner_;
  std::atomic<bool> stopped_{false};
  std::mutex connections_mutex_;
  std::list<Connection> connections_;
};

}  // namespace logicsim
