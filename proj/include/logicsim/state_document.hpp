#pragma once

#include <json.hpp>

#include "logicsim/evaluate.hpp"

// JSON encoding of circuits and evaluation results. Field names are part of
// the session protocol; see schema/protocol.schema.json.

namespace logicsim {

using StateDocument = nlohmann::json;

inline std::string_view element_category(const Element& e) noexcept {
  return e.is_gate() ? "gate" : e.is_input() ? "input" : "output";
}

inline nlohmann::json pin_to_json(const PinRef& p) {
  return {{"element", p.element.value},
          {"dir", p.direction == PinDirection::In ? "in" : "out"},
          {"index", p.index}};
}

inline nlohmann::json position_to_json(const Position& p) { return {{"x", p.x}, {"y", p.y}}; }

inline nlohmann::json element_to_json(const Element& e) {
  nlohmann::json params = nlohmann::json::object();
  if (e.is_switch()) params["on"] = std::get<InputKind>(e.kind).on;
  nlohmann::json j{{"id", e.id.value},
                   {"category", element_category(e)},
                   {"kind", kind_name(e.kind)},
                   {"params", std::move(params)},
                   {"position", position_to_json(e.position)},
                   {"inputs", e.inputs()},
                   {"outputs", e.outputs()}};
  if (!e.name.empty()) j["name"] = e.name;
  return j;
}

inline nlohmann::json diagnostic_to_json(const Diagnostic& d) {
  nlohmann::json elements = nlohmann::json::array(), pins = nlohmann::json::array();
  for (auto id : d.elements) elements.push_back(id.value);
  for (const auto& p : d.pins) pins.push_back(pin_to_json(p));
  return {{"kind", diagnostic_name(d.kind)}, {"elements", std::move(elements)}, {"pins", std::move(pins)}};
}

/// Tree view of a circuit and its evaluation, as rendered by the editor UI.
inline StateDocument export_state(const Circuit& circuit, const EvalResult& eval) {
  auto elements = nlohmann::json::array();
  for (const auto& [id, e] : circuit.elements()) elements.push_back(element_to_json(e));

  auto connections = nlohmann::json::array();
  for (const auto& c : circuit.connections()) {
    connections.push_back({{"from", pin_to_json(c.from)}, {"to", pin_to_json(c.to)}});
  }

  auto levels = nlohmann::json::array();
  for (const auto& [pin, level] : eval.levels) {
    levels.push_back({{"pin", pin_to_json(pin)}, {"level", std::string(1, level_char(level))}});
  }

  auto indicators = nlohmann::json::array();
  for (const auto& [id, state] : eval.indicators) {
    nlohmann::json entry{{"element", id.value}, {"state", indicator_name(state)}};
    if (auto e = circuit.find(id); e && !e->name.empty()) entry["name"] = e->name;
    indicators.push_back(std::move(entry));
  }

  auto diagnostics = nlohmann::json::array();
  for (const auto& d : eval.diagnostics) diagnostics.push_back(diagnostic_to_json(d));

  return {{"elements", std::move(elements)},
          {"connections", std::move(connections)},
          {"levels", std::move(levels)},
          {"indicators", std::move(indicators)},
          {"diagnostics", std::move(diagnostics)}};
}

}  // namespace logicsim
