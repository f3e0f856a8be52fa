#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "logicsim/evaluate.hpp"
#include "logicsim/state_document.hpp"

namespace logicsim {

struct Viewport {
  static constexpr double min_zoom = 0.25;
  static constexpr double max_zoom = 4.0;

  double zoom = 1.0;
  Position pan;

  friend bool operator==(const Viewport&, const Viewport&) = default;
};

enum class EditMode : std::uint8_t { Normal, DeleteActive };

constexpr std::string_view mode_name(EditMode m) noexcept {
  return m == EditMode::Normal ? "normal" : "delete_active";
}

namespace command {

struct AddGate {
  GateKind kind = GateKind::And;
  Position position;
};
struct AddInput {
  InputKind kind;
  Position position;
};
struct AddOutput {
  OutputKind kind = OutputKind::Led;
  Position position;
};
struct TapPin {
  PinRef pin;
};
struct TapElement {
  ElementId element;
};
struct MoveElement {
  ElementId element;
  Position position;
};
struct ToggleDeleteMode {};
struct Clean {};
struct SetViewport {
  double zoom = 1.0;
  Position pan;
};
struct ResetViewport {};
struct NewCircuit {};

}  // namespace command

using Command = std::variant<command::AddGate, command::AddInput, command::AddOutput, command::TapPin,
                             command::TapElement, command::MoveElement, command::ToggleDeleteMode,
                             command::Clean, command::SetViewport, command::ResetViewport,
                             command::NewCircuit>;

enum class EventKind : std::uint8_t {
  ElementAdded,
  ElementDeleted,
  ConnectionMade,
  SwitchToggled,
  ModeChanged,
  Cleaned,
  ViewportChanged,
  StateRefreshed,
  Rejected,
};

constexpr std::string_view event_name(EventKind k) noexcept {
  switch (k) {
    case EventKind::ElementAdded: return "element_added";
    case EventKind::ElementDeleted: return "element_deleted";
    case EventKind::ConnectionMade: return "connection_made";
    case EventKind::SwitchToggled: return "switch_toggled";
    case EventKind::ModeChanged: return "mode_changed";
    case EventKind::Cleaned: return "cleaned";
    case EventKind::ViewportChanged: return "viewport_changed";
    case EventKind::StateRefreshed: return "state_refreshed";
    case EventKind::Rejected: break;
  }
  return "rejected";
}

/// Outcome of one command. Events that changed the circuit carry the
/// evaluation computed right after the change.
struct Event {
  EventKind kind = EventKind::StateRefreshed;
  std::optional<ElementId> element;
  std::optional<Connection> connection;
  std::optional<LogicLevel> level;
  std::optional<EditMode> mode;
  std::optional<Viewport> viewport;
  std::string reason;
  std::optional<EvalResult> evaluation;
};

/// Interaction state machine for the circuit editor: two-tap wiring through
/// a pending output pin, a sticky delete mode, clean, and the viewport.
/// Rendering is someone else's job; invalid taps come back as Rejected.
class EditorSession {
 public:
  EditorSession() : last_eval_(evaluate(circuit_)) {}

  Event apply(const Command& c) {
    return std::visit([this](const auto& cmd) { return handle(cmd); }, c);
  }

  /// Replaces the circuit (e.g. after loading a file) and resets the view.
  Event replace_circuit(Circuit c) {
    circuit_ = std::move(c);
    mode_ = EditMode::Normal;
    pending_.reset();
    viewport_ = {};
    return mutated({EventKind::StateRefreshed});
  }

  const Circuit& circuit() const noexcept { return circuit_; }
  EditMode mode() const noexcept { return mode_; }
  const std::optional<PinRef>& pending_pin() const noexcept { return pending_; }
  const Viewport& viewport() const noexcept { return viewport_; }
  const EvalResult& last_eval() const noexcept { return last_eval_; }

  StateDocument snapshot() const {
    auto doc = export_state(circuit_, last_eval_);
    doc["mode"] = mode_name(mode_);
    doc["pending_pin"] = pending_ ? pin_to_json(*pending_) : nlohmann::json(nullptr);
    doc["viewport"] = {{"zoom", viewport_.zoom}, {"pan", position_to_json(viewport_.pan)}};
    return doc;
  }

 private:
  static bool finite(const Position& p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

  static Event rejected(std::string reason) {
    Event e{EventKind::Rejected};
    e.reason = std::move(reason);
    return e;
  }

  Event mutated(Event e) {
    last_eval_ = evaluate(circuit_);
    e.evaluation = last_eval_;
    return e;
  }

  Event added(ElementKind kind, const Position& p) {
    if (!finite(p)) return rejected("position must be finite");
    Event e{EventKind::ElementAdded};
    e.element = circuit_.add_element(kind, p);
    return mutated(std::move(e));
  }

  Event handle(const command::AddGate& c) { return added(c.kind, c.position); }
  Event handle(const command::AddInput& c) { return added(c.kind, c.position); }
  Event handle(const command::AddOutput& c) { return added(c.kind, c.position); }

  Event handle(const command::TapPin& c) {
    if (mode_ == EditMode::DeleteActive) return rejected("wiring is disabled while delete mode is active");
    if (!circuit_.valid_pin(c.pin)) return rejected("no such pin");
    if (c.pin.direction == PinDirection::Out) {
      pending_ = c.pin;
      return {EventKind::StateRefreshed};
    }
    if (!pending_) return rejected("select an output pin first");
    try {
      Event e{EventKind::ConnectionMade};
      e.connection = circuit_.connect(*pending_, c.pin);
      pending_.reset();
      return mutated(std::move(e));
    } catch (const circuit_error& err) {
      return rejected(err.what());
    }
  }

  Event handle(const command::TapElement& c) {
    const Element* e = circuit_.find(c.element);
    if (!e) return rejected("no such element");
    if (mode_ == EditMode::DeleteActive) {
      circuit_.remove_element(c.element);
      if (pending_ && pending_->element == c.element) pending_.reset();
      Event ev{EventKind::ElementDeleted};
      ev.element = c.element;
      return mutated(std::move(ev));
    }
    if (!e->is_switch()) return {EventKind::StateRefreshed};
    Event ev{EventKind::SwitchToggled};
    ev.element = c.element;
    ev.level = circuit_.toggle_switch(c.element);
    return mutated(std::move(ev));
  }

  Event handle(const command::MoveElement& c) {
    if (!circuit_.contains(c.element)) return rejected("no such element");
    if (!finite(c.position)) return rejected("position must be finite");
    circuit_.move_element(c.element, c.position);
    return mutated({EventKind::StateRefreshed});
  }

  Event handle(const command::ToggleDeleteMode&) {
    mode_ = mode_ == EditMode::Normal ? EditMode::DeleteActive : EditMode::Normal;
    if (mode_ == EditMode::DeleteActive) pending_.reset();
    Event e{EventKind::ModeChanged};
    e.mode = mode_;
    return e;
  }

  Event handle(const command::Clean&) {
    circuit_.clear();
    pending_.reset();
    return mutated({EventKind::Cleaned});
  }

  Event handle(const command::SetViewport& c) {
    if (std::isnan(c.zoom) || !finite(c.pan)) return rejected("viewport values must be finite");
    viewport_.zoom = std::clamp(c.zoom, Viewport::min_zoom, Viewport::max_zoom);
    viewport_.pan = c.pan;
    Event e{EventKind::ViewportChanged};
    e.viewport = viewport_;
    return e;
  }

  Event handle(const command::ResetViewport&) {
    viewport_ = {};
    Event e{EventKind::ViewportChanged};
    e.viewport = viewport_;
    return e;
  }

  Event handle(const command::NewCircuit&) {
    circuit_ = Circuit{};
    mode_ = EditMode::Normal;
    pending_.reset();
    viewport_ = {};
    return mutated({EventKind::StateRefreshed});
  }

  Circuit circuit_;
  EditMode mode_ = EditMode::Normal;
  std::optional<PinRef> pending_;
  Viewport viewport_;
  EvalResult last_eval_;
};

}  // namespace logicsim
