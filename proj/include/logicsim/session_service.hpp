#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "logicsim/netlist.hpp"
#include "logicsim/protocol.hpp"
#include "logicsim/truth_table.hpp"

namespace logicsim {

enum class service_errc { unknown_session, out_of_order, bad_request, parse_error, unknown_name, too_many_inputs, io_error };

constexpr std::string_view service_errc_name(service_errc e) noexcept {
  switch (e) {
    case service_errc::unknown_session: return "unknown_session";
    case service_errc::out_of_order: return "out_of_order";
    case service_errc::bad_request: return "bad_request";
    case service_errc::parse_error: return "parse_error";
    case service_errc::unknown_name: return "unknown_name";
    case service_errc::too_many_inputs: return "too_many_inputs";
    case service_errc::io_error: break;
  }
  return "io_error";
}

class service_error : public std::runtime_error {
 public:
  service_error(service_errc code, const std::string& message, nlohmann::json extra = nlohmann::json::object())
      : std::runtime_error(message), code_(code), extra_(std::move(extra)) {}

  service_errc code() const noexcept { return code_; }

  /// {"code": ..., "message": ..., plus any code-specific fields}
  nlohmann::json to_json() const {
    nlohmann::json j = extra_;
    j["code"] = service_errc_name(code_);
    j["message"] = what();
    return j;
  }

 private:
  service_errc code_;
  nlohmann::json extra_;
};

struct ServiceConfig {
  std::filesystem::path data_dir = "circuits";
  std::size_t table_cap = default_table_input_cap;
};

inline nlohmann::json truth_table_to_json(const TruthTable& t, const Circuit& c) {
  const auto names = element_names(c);
  auto ids = [&](const std::vector<ElementId>& v) {
    auto a = nlohmann::json::array();
    for (auto id : v) a.push_back({{"element", id.value}, {"name", names.at(id)}});
    return a;
  };
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    std::string in, out;
    for (bool b : r.inputs) in += b ? '1' : '0';
    for (auto l : r.outputs) out += level_char(l);
    rows.push_back({{"inputs", in}, {"outputs", out}});
  }
  return {{"inputs", ids(t.inputs)}, {"outputs", ids(t.outputs)}, {"rows", std::move(rows)}};
}

/// Registry of editor sessions plus `.lgc` persistence.
///
/// Sessions are independent. Within one session, commands are applied in
/// strict seq order (first seq is 1) under the session's own lock; the
/// registry lock is held only for lookup and creation.
class SessionService {
 public:
  explicit SessionService(ServiceConfig config = {}) : config_(std::move(config)), rng_(std::random_device{}()) {}

  const ServiceConfig& config() const noexcept { return config_; }

  std::string create_session() {
    std::lock_guard lock(registry_mutex_);
    std::string id;
    do {
      std::ostringstream os;
      os << std::hex << rng_();
      id = os.str();
    } while (sessions_.contains(id));
    sessions_.emplace(id, std::make_shared<Slot>());
    return id;
  }

  std::size_t session_count() const {
    std::lock_guard lock(registry_mutex_);
    return sessions_.size();
  }

  /// Applies `command` if `seq` is exactly one past the last accepted seq.
  /// Response: {"seq", "event", "state"}.
  nlohmann::json dispatch(const std::string& session, std::uint64_t seq, const Command& command) {
    auto s = slot(session);
    std::lock_guard lock(s->mutex);
    if (seq != s->last_seq + 1) {
      throw service_error(service_errc::out_of_order,
                          "expected seq " + std::to_string(s->last_seq + 1) + ", got " + std::to_string(seq),
                          {{"expected", s->last_seq + 1}});
    }
    auto event = s->session.apply(command);
    s->last_seq = seq;
    return {{"seq", seq}, {"event", event_to_json(event)}, {"state", s->session.snapshot()}};
  }

  StateDocument state(const std::string& session) const {
    auto s = slot(session);
    std::lock_guard lock(s->mutex);
    auto doc = s->session.snapshot();
    doc["seq"] = s->last_seq;
    return doc;
  }

  std::uint64_t last_seq(const std::string& session) const {
    auto s = slot(session);
    std::lock_guard lock(s->mutex);
    return s->last_seq;
  }

  std::string circuit_text(const std::string& session) const {
    auto s = slot(session);
    std::lock_guard lock(s->mutex);
    return serialize(s->session.circuit());
  }

  nlohmann::json truth_table(const std::string& session) const {
    auto s = slot(session);
    std::lock_guard lock(s->mutex);
    try {
      return truth_table_to_json(logicsim::truth_table(s->session.circuit(), config_.table_cap), s->session.circuit());
    } catch (const circuit_error& e) {
      throw service_error(service_errc::too_many_inputs, e.what());
    }
  }

  /// Replaces the session circuit with parsed `.lgc` text. On a parse error
  /// the session is left untouched. Response: {"event", "state"}.
  nlohmann::json load_text(const std::string& session, std::string_view text) {
    auto s = slot(session);
    Circuit c;
    try {
      c = parse(text);
    } catch (const parse_error& e) {
      throw service_error(service_errc::parse_error, e.what(),
                          {{"kind", parse_error_name(e.kind())}, {"line", e.line()}, {"column", e.column()}});
    }
    std::lock_guard lock(s->mutex);
    auto event = s->session.replace_circuit(std::move(c));
    return {{"event", event_to_json(event)}, {"state", s->session.snapshot()}};
  }

  nlohmann::json load_circuit(const std::string& session, const std::string& name) {
    slot(session);
    const auto path = stored_path(name);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw service_error(service_errc::unknown_name, "no stored circuit named '" + name + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return load_text(session, text.str());
  }

  /// Writes the session circuit to `<data_dir>/<name>.lgc` via a temporary
  /// file and a rename, so readers never see a partial file.
  void save_circuit(const std::string& session, const std::string& name) {
    const auto text = circuit_text(session);
    const auto path = stored_path(name);
    std::error_code ec;
    std::filesystem::create_directories(config_.data_dir, ec);
    auto tmp = path;
    {
      std::lock_guard lock(registry_mutex_);
      tmp += ".tmp" + std::to_string(rng_());
    }
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << text;
      out.flush();
      if (!out) throw service_error(service_errc::io_error, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw service_error(service_errc::io_error, "cannot store " + path.string());
    }
  }

  /// Handles one protocol message and never throws: failures come back as
  /// {"error": {...}} (with "seq" echoed when the request carried one).
  ///
  /// Requests: {"op": "create"}, {"op": "state", "session"},
  /// {"op": "command", "session", "seq", "command"} ("op" defaults to
  /// "command"), {"op": "load", "session", "text" | "name"},
  /// {"op": "save", "session", "name"}, {"op": "circuit", "session"}.
  nlohmann::json handle(const nlohmann::json& request) noexcept {
    nlohmann::json seq = nullptr;
    try {
      if (!request.is_object()) throw protocol_error("request must be an object");
      if (auto it = request.find("seq"); it != request.end()) seq = *it;
      std::string op = "command";
      if (auto it = request.find("op"); it != request.end()) {
        if (!it->is_string()) throw protocol_error("field 'op' must be a string");
        op = it->get<std::string>();
      }
      if (op == "create") {
        auto id = create_session();
        return {{"session", id}, {"state", state(id)}};
      }
      const auto session = detail::string_field(request, "session");
      if (op == "command") {
        auto n = detail::unsigned_field(request, "seq", std::numeric_limits<std::int64_t>::max());
        auto command = command_from_json(detail::field(request, "command"));
        return dispatch(session, n, command);
      }
      if (op == "state") return {{"session", session}, {"state", state(session)}};
      if (op == "circuit") return {{"session", session}, {"text", circuit_text(session)}};
      if (op == "save") {
        save_circuit(session, detail::string_field(request, "name"));
        return {{"session", session}, {"saved", detail::string_field(request, "name")}};
      }
      if (op == "load") {
        if (request.contains("text")) return load_text(session, detail::string_field(request, "text"));
        return load_circuit(session, detail::string_field(request, "name"));
      }
      throw protocol_error("unknown op '" + op + "'");
    } catch (const service_error& e) {
      return error_response(seq, e.to_json());
    } catch (const protocol_error& e) {
      return error_response(seq, service_error(service_errc::bad_request, e.what()).to_json());
    } catch (const std::exception& e) {
      return error_response(seq, service_error(service_errc::bad_request, e.what()).to_json());
    }
  }

  /// Parses `text` as JSON first; malformed JSON is a bad_request.
  std::string handle_text(std::string_view text) noexcept {
    auto request = nlohmann::json::parse(text, nullptr, false);
    if (request.is_discarded()) {
      return error_response(nullptr, service_error(service_errc::bad_request, "malformed JSON").to_json()).dump();
    }
    return handle(request).dump();
  }

  static bool valid_store_name(std::string_view name) noexcept {
    if (name.empty() || name.size() > 64) return false;
    for (char c : name) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
      if (!ok) return false;
    }
    return true;
  }

 private:
  struct Slot {
    mutable std::mutex mutex;
    EditorSession session;
    std::uint64_t last_seq = 0;
  };

  static nlohmann::json error_response(const nlohmann::json& seq, nlohmann::json error) {
    nlohmann::json j{{"error", std::move(error)}};
    if (!seq.is_null()) j["seq"] = seq;
    return j;
  }

  std::shared_ptr<Slot> slot(const std::string& id) const {
    std::lock_guard lock(registry_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw service_error(service_errc::unknown_session, "unknown session '" + id + "'");
    return it->second;
  }

  std::filesystem::path stored_path(const std::string& name) const {
    if (!valid_store_name(name)) {
      throw service_error(service_errc::bad_request, "circuit names use letters, digits, '_' and '-'");
    }
    return config_.data_dir / (name + ".lgc");
  }

  ServiceConfig config_;
  mutable std::mutex registry_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Slot>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace logicsim
