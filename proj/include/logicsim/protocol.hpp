#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "logicsim/editor_session.hpp"

// Wire encoding of editor commands and events.

namespace logicsim {

/// A request that does not match the protocol schema.
class protocol_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw protocol_error(std::string("missing field '") + key + "'");
  return *it;
}

inline std::uint64_t unsigned_field(const nlohmann::json& j, const char* key, std::uint64_t max) {
  const auto& v = field(j, key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw protocol_error(std::string("field '") + key + "' must be a non-negative integer");
  }
  auto u = v.get<std::uint64_t>();
  if (u > max) throw protocol_error(std::string("field '") + key + "' is out of range");
  return u;
}

inline double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw protocol_error(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline std::string string_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw protocol_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline Position position_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  if (!it->is_object()) throw protocol_error(std::string("field '") + key + "' must be an object");
  return {number_field(*it, "x"), number_field(*it, "y")};
}

inline ElementId element_field(const nlohmann::json& j, const char* key) {
  return ElementId{static_cast<std::uint32_t>(unsigned_field(j, key, std::numeric_limits<std::uint32_t>::max()))};
}

}  // namespace detail

inline PinRef pin_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw protocol_error("pin must be an object");
  PinRef p;
  p.element = detail::element_field(j, "element");
  auto dir = detail::string_field(j, "dir");
  if (dir == "in") {
    p.direction = PinDirection::In;
  } else if (dir == "out") {
    p.direction = PinDirection::Out;
  } else {
    throw protocol_error("pin dir must be 'in' or 'out'");
  }
  p.index = static_cast<std::uint8_t>(detail::unsigned_field(j, "index", 255));
  return p;
}

inline Command command_from_json(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw protocol_error("command must be an object");
  const auto type = string_field(j, "type");

  if (type == "add_gate") {
    auto kind = gate_from_name(string_field(j, "kind"));
    if (!kind) throw protocol_error("unknown gate kind");
    return command::AddGate{*kind, position_field(j, "position")};
  }
  if (type == "add_input") {
    auto kind = input_from_name(string_field(j, "kind"));
    if (!kind) throw protocol_error("unknown input kind");
    bool on = false;
    if (auto it = j.find("on"); it != j.end()) {
      if (!it->is_boolean()) throw protocol_error("field 'on' must be a boolean");
      on = it->get<bool>() && *kind == InputKind::Type::Switch;
    }
    return command::AddInput{InputKind{*kind, on}, position_field(j, "position")};
  }
  if (type == "add_output") {
    auto kind = output_from_name(string_field(j, "kind"));
    if (!kind) throw protocol_error("unknown output kind");
    return command::AddOutput{*kind, position_field(j, "position")};
  }
  if (type == "tap_pin") return command::TapPin{pin_from_json(field(j, "pin"))};
  if (type == "tap_element") return command::TapElement{element_field(j, "element")};
  if (type == "move_element") {
    if (!j.contains("position")) throw protocol_error("missing field 'position'");
    return command::MoveElement{element_field(j, "element"), position_field(j, "position")};
  }
  if (type == "toggle_delete_mode") return command::ToggleDeleteMode{};
  if (type == "clean") return command::Clean{};
  if (type == "set_viewport") return command::SetViewport{number_field(j, "zoom"), position_field(j, "pan")};
  if (type == "reset_viewport") return command::ResetViewport{};
  if (type == "new_circuit") return command::NewCircuit{};
  throw protocol_error("unknown command type '" + type + "'");
}

inline nlohmann::json command_to_json(const Command& c) {
  using nlohmann::json;
  return std::visit(
      [](const auto& cmd) -> json {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, command::AddGate>) {
          return {{"type", "add_gate"}, {"kind", gate_name(cmd.kind)}, {"position", position_to_json(cmd.position)}};
        } else if constexpr (std::is_same_v<T, command::AddInput>) {
          return {{"type", "add_input"},
                  {"kind", input_name(cmd.kind.type)},
                  {"on", cmd.kind.on},
                  {"position", position_to_json(cmd.position)}};
        } else if constexpr (std::is_same_v<T, command::AddOutput>) {
          return {{"type", "add_output"}, {"kind", output_name(cmd.kind)}, {"position", position_to_json(cmd.position)}};
        } else if constexpr (std::is_same_v<T, command::TapPin>) {
          return {{"type", "tap_pin"}, {"pin", pin_to_json(cmd.pin)}};
        } else if constexpr (std::is_same_v<T, command::TapElement>) {
          return {{"type", "tap_element"}, {"element", cmd.element.value}};
        } else if constexpr (std::is_same_v<T, command::MoveElement>) {
          return {{"type", "move_element"}, {"element", cmd.element.value}, {"position", position_to_json(cmd.position)}};
        } else if constexpr (std::is_same_v<T, command::ToggleDeleteMode>) {
          return {{"type", "toggle_delete_mode"}};
        } else if constexpr (std::is_same_v<T, command::Clean>) {
          return {{"type", "clean"}};
        } else if constexpr (std::is_same_v<T, command::SetViewport>) {
          return {{"type", "set_viewport"}, {"zoom", cmd.zoom}, {"pan", position_to_json(cmd.pan)}};
        } else if constexpr (std::is_same_v<T, command::ResetViewport>) {
          return {{"type", "reset_viewport"}};
        } else {
          return {{"type", "new_circuit"}};
        }
      },
      c);
}

inline nlohmann::json event_to_json(const Event& e) {
  nlohmann::json j{{"type", event_name(e.kind)}};
  if (e.element) j["element"] = e.element->value;
  if (e.connection) j["connection"] = {{"from", pin_to_json(e.connection->from)}, {"to", pin_to_json(e.connection->to)}};
  if (e.level) j["level"] = std::string(1, level_char(*e.level));
  if (e.mode) j["mode"] = mode_name(*e.mode);
  if (e.viewport) j["viewport"] = {{"zoom", e.viewport->zoom}, {"pan", position_to_json(e.viewport->pan)}};
  if (e.kind == EventKind::Rejected) j["reason"] = e.reason;
  return j;
}

}  // namespace logicsim
