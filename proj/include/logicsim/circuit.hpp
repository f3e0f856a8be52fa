#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "logicsim/errors.hpp"
#include "logicsim/logic_level.hpp"

namespace logicsim {

/// Opaque element handle. Ids are assigned in increasing order and never
/// reused by the circuit that issued them.
struct ElementId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(ElementId, ElementId) = default;
};

inline std::string to_string(ElementId id) { return "#" + std::to_string(id.value); }

enum class PinDirection : std::uint8_t { In, Out };

struct PinRef {
  ElementId element;
  PinDirection direction = PinDirection::Out;
  std::uint8_t index = 0;

  static constexpr PinRef in(ElementId e, std::uint8_t i = 0) noexcept { return {e, PinDirection::In, i}; }
  static constexpr PinRef out(ElementId e, std::uint8_t i = 0) noexcept { return {e, PinDirection::Out, i}; }

  friend constexpr auto operator<=>(const PinRef&, const PinRef&) = default;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Position&, const Position&) = default;
};

using ElementKind = std::variant<GateKind, InputKind, OutputKind>;

inline std::size_t input_count(const ElementKind& kind) noexcept {
  if (auto g = std::get_if<GateKind>(&kind)) return arity(*g);
  return std::holds_alternative<OutputKind>(kind) ? 1 : 0;
}

inline std::size_t output_count(const ElementKind& kind) noexcept {
  return std::holds_alternative<OutputKind>(kind) ? 0 : 1;
}

/// "and", "switch", "led", ...
inline std::string_view kind_name(const ElementKind& kind) noexcept {
  if (auto g = std::get_if<GateKind>(&kind)) return gate_name(*g);
  if (auto i = std::get_if<InputKind>(&kind)) return input_name(i->type);
  return output_name(std::get<OutputKind>(kind));
}

struct Element {
  ElementId id;
  ElementKind kind;
  Position position;
  std::string name;  // optional label; empty for editor-created elements

  bool is_gate() const noexcept { return std::holds_alternative<GateKind>(kind); }
  bool is_input() const noexcept { return std::holds_alternative<InputKind>(kind); }
  bool is_output() const noexcept { return std::holds_alternative<OutputKind>(kind); }
  bool is_switch() const noexcept {
    auto i = std::get_if<InputKind>(&kind);
    return i && i->is_switch();
  }

  std::size_t inputs() const noexcept { return input_count(kind); }
  std::size_t outputs() const noexcept { return output_count(kind); }

  friend bool operator==(const Element&, const Element&) = default;
};

/// Directed wire from an Out pin to an In pin.
struct Connection {
  PinRef from;
  PinRef to;

  friend constexpr auto operator<=>(const Connection&, const Connection&) = default;
};

/// Editable netlist: elements plus single-driver connections.
///
/// Connections are keyed by their destination pin, which makes the
/// one-driver-per-input rule structural. Iteration order is by id, so every
/// traversal is deterministic.
class Circuit {
 public:
  ElementId add_element(ElementKind kind, Position position = {}, std::string name = {}) {
    ElementId id{next_id_++};
    elements_.emplace(id, Element{id, kind, position, std::move(name)});
    return id;
  }

  void remove_element(ElementId id) {
    require(id);
    std::erase_if(drivers_, [id](const auto& entry) {
      return entry.first.element == id || entry.second.element == id;
    });
    elements_.erase(id);
  }

  Connection connect(PinRef from, PinRef to) {
    check_pin(from, PinDirection::Out);
    check_pin(to, PinDirection::In);
    if (auto it = drivers_.find(to); it != drivers_.end()) {
      if (it->second == from) {
        throw circuit_error(errc::duplicate_connection, "connection already exists");
      }
      throw circuit_error(errc::input_already_driven, "input pin already has a driver");
    }
    drivers_.emplace(to, from);
    return {from, to};
  }

  void disconnect(PinRef from, PinRef to) {
    auto it = drivers_.find(to);
    if (it == drivers_.end() || it->second != from) {
      throw circuit_error(errc::unknown_connection, "no such connection");
    }
    drivers_.erase(it);
  }

  /// Removes everything; the id counter keeps counting.
  void clear() noexcept {
    elements_.clear();
    drivers_.clear();
  }

  LogicLevel toggle_switch(ElementId id) {
    auto& in = switch_ref(id);
    in.on = !in.on;
    return in.level();
  }

  void set_switch(ElementId id, bool on) { switch_ref(id).on = on; }

  void move_element(ElementId id, Position p) { require(id).position = p; }

  bool contains(ElementId id) const noexcept { return elements_.contains(id); }

  const Element* find(ElementId id) const noexcept {
    auto it = elements_.find(id);
    return it == elements_.end() ? nullptr : &it->second;
  }

  const Element& element(ElementId id) const {
    auto e = find(id);
    if (!e) throw circuit_error(errc::unknown_element, "unknown element " + to_string(id));
    return *e;
  }

  /// True iff `p` names an existing element and a pin it actually has.
  bool valid_pin(const PinRef& p) const noexcept {
    auto e = find(p.element);
    if (!e) return false;
    auto count = p.direction == PinDirection::In ? e->inputs() : e->outputs();
    return p.index < count;
  }

  std::optional<PinRef> driver_of(const PinRef& in) const {
    auto it = drivers_.find(in);
    if (it == drivers_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<ElementId, Element>& elements() const noexcept { return elements_; }

  /// Destination pin -> driving Out pin, ordered by destination.
  const std::map<PinRef, PinRef>& drivers() const noexcept { return drivers_; }

  /// All connections sorted by (to.element, to.index).
  std::vector<Connection> connections() const {
    std::vector<Connection> out;
    out.reserve(drivers_.size());
    for (const auto& [to, from] : drivers_) out.push_back({from, to});
    return out;
  }

  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t connection_count() const noexcept { return drivers_.size(); }
  bool empty() const noexcept { return elements_.empty(); }

  /// Id the next add_element() will return.
  ElementId next_id() const noexcept { return ElementId{next_id_}; }

  std::vector<ElementId> switches() const {
    std::vector<ElementId> ids;
    for (const auto& [id, e] : elements_) {
      if (e.is_switch()) ids.push_back(id);
    }
    return ids;
  }

  std::vector<ElementId> indicators() const {
    std::vector<ElementId> ids;
    for (const auto& [id, e] : elements_) {
      if (e.is_output()) ids.push_back(id);
    }
    return ids;
  }

  /// First element carrying `name`, if any.
  std::optional<ElementId> find_by_name(std::string_view name) const {
    for (const auto& [id, e] : elements_) {
      if (!name.empty() && e.name == name) return id;
    }
    return std::nullopt;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  Element& require(ElementId id) {
    auto it = elements_.find(id);
    if (it == elements_.end()) {
      throw circuit_error(errc::unknown_element, "unknown element " + to_string(id));
    }
    return it->second;
  }

  InputKind& switch_ref(ElementId id) {
    auto& e = require(id);
    auto in = std::get_if<InputKind>(&e.kind);
    if (!in || !in->is_switch()) {
      throw circuit_error(errc::not_a_switch, to_string(id) + " is not a switch");
    }
    return *in;
  }

  void check_pin(const PinRef& p, PinDirection expected) const {
    if (!contains(p.element)) {
      throw circuit_error(errc::unknown_element, "unknown element " + to_string(p.element));
    }
    if (p.direction != expected || !valid_pin(p)) {
      throw circuit_error(errc::bad_pin, "bad pin on element " + to_string(p.element));
    }
  }

  std::map<ElementId, Element> elements_;
  std::map<PinRef, PinRef> drivers_;
  std::uint32_t next_id_ = 1;
};

}  // namespace logicsim
