#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>

#include "logicsim/errors.hpp"

namespace logicsim {

/// Three-valued signal. Undefined sits below Low and High in the
/// information order: it refines to either, Low and High are incomparable.
enum class LogicLevel : std::uint8_t { Low, High, Undefined };

constexpr LogicLevel to_level(bool b) noexcept { return b ? LogicLevel::High : LogicLevel::Low; }

constexpr bool is_concrete(LogicLevel l) noexcept { return l != LogicLevel::Undefined; }

/// True iff `a` carries no more information than `b`.
constexpr bool refines_to(LogicLevel a, LogicLevel b) noexcept {
  return a == LogicLevel::Undefined || a == b;
}

/// '0', '1' or 'x'.
constexpr char level_char(LogicLevel l) noexcept {
  switch (l) {
    case LogicLevel::Low: return '0';
    case LogicLevel::High: return '1';
    case LogicLevel::Undefined: break;
  }
  return 'x';
}

constexpr LogicLevel operator!(LogicLevel l) noexcept {
  switch (l) {
    case LogicLevel::Low: return LogicLevel::High;
    case LogicLevel::High: return LogicLevel::Low;
    case LogicLevel::Undefined: break;
  }
  return LogicLevel::Undefined;
}

enum class GateKind : std::uint8_t { And, Or, Not, Nand, Nor, Xor, Xnor, Buffer };

inline constexpr std::array<GateKind, 8> all_gate_kinds{GateKind::And,  GateKind::Or,  GateKind::Not,
                                                        GateKind::Nand, GateKind::Nor, GateKind::Xor,
                                                        GateKind::Xnor, GateKind::Buffer};

constexpr std::size_t arity(GateKind k) noexcept {
  return (k == GateKind::Not || k == GateKind::Buffer) ? 1 : 2;
}

/// Keyword used by the netlist format and the protocol.
constexpr std::string_view gate_name(GateKind k) noexcept {
  switch (k) {
    case GateKind::And: return "and";
    case GateKind::Or: return "or";
    case GateKind::Not: return "not";
    case GateKind::Nand: return "nand";
    case GateKind::Nor: return "nor";
    case GateKind::Xor: return "xor";
    case GateKind::Xnor: return "xnor";
    case GateKind::Buffer: return "buf";
  }
  return "?";
}

constexpr std::optional<GateKind> gate_from_name(std::string_view s) noexcept {
  for (auto k : all_gate_kinds) {
    if (gate_name(k) == s) return k;
  }
  return std::nullopt;
}

/// A signal source. Switches carry their on/off position; constants ignore it.
struct InputKind {
  enum class Type : std::uint8_t { Const0, Const1, Switch };

  Type type = Type::Switch;
  bool on = false;

  static constexpr InputKind const0() noexcept { return {Type::Const0, false}; }
  static constexpr InputKind const1() noexcept { return {Type::Const1, false}; }
  static constexpr InputKind make_switch(bool on = false) noexcept { return {Type::Switch, on}; }

  constexpr bool is_switch() const noexcept { return type == Type::Switch; }

  constexpr LogicLevel level() const noexcept {
    switch (type) {
      case Type::Const0: return LogicLevel::Low;
      case Type::Const1: return LogicLevel::High;
      case Type::Switch: break;
    }
    return to_level(on);
  }

  friend constexpr bool operator==(const InputKind& a, const InputKind& b) noexcept {
    return a.type == b.type && (a.type != Type::Switch || a.on == b.on);
  }
};

constexpr std::string_view input_name(InputKind::Type t) noexcept {
  switch (t) {
    case InputKind::Type::Const0: return "const0";
    case InputKind::Type::Const1: return "const1";
    case InputKind::Type::Switch: break;
  }
  return "switch";
}

constexpr std::optional<InputKind::Type> input_from_name(std::string_view s) noexcept {
  if (s == "const0") return InputKind::Type::Const0;
  if (s == "const1") return InputKind::Type::Const1;
  if (s == "switch") return InputKind::Type::Switch;
  return std::nullopt;
}

// Lamp and Led behave identically; they differ only in how they are drawn.
enum class OutputKind : std::uint8_t { Lamp, Led };

constexpr std::string_view output_name(OutputKind k) noexcept {
  return k == OutputKind::Lamp ? "lamp" : "led";
}

constexpr std::optional<OutputKind> output_from_name(std::string_view s) noexcept {
  if (s == "lamp") return OutputKind::Lamp;
  if (s == "led") return OutputKind::Led;
  return std::nullopt;
}

namespace detail {

// Conjunction with Low dominating, disjunction with High dominating.
constexpr LogicLevel and3(std::span<const LogicLevel> in) noexcept {
  bool undefined = false;
  for (auto l : in) {
    if (l == LogicLevel::Low) return LogicLevel::Low;
    undefined |= l == LogicLevel::Undefined;
  }
  return undefined ? LogicLevel::Undefined : LogicLevel::High;
}

constexpr LogicLevel or3(std::span<const LogicLevel> in) noexcept {
  bool undefined = false;
  for (auto l : in) {
    if (l == LogicLevel::High) return LogicLevel::High;
    undefined |= l == LogicLevel::Undefined;
  }
  return undefined ? LogicLevel::Undefined : LogicLevel::Low;
}

constexpr LogicLevel xor3(std::span<const LogicLevel> in) noexcept {
  bool acc = false;
  for (auto l : in) {
    if (l == LogicLevel::Undefined) return LogicLevel::Undefined;
    acc ^= l == LogicLevel::High;
  }
  return to_level(acc);
}

constexpr LogicLevel apply_gate(GateKind kind, std::span<const LogicLevel> in) noexcept {
  switch (kind) {
    case GateKind::And: return and3(in);
    case GateKind::Nand: return !and3(in);
    case GateKind::Or: return or3(in);
    case GateKind::Nor: return !or3(in);
    case GateKind::Xor: return xor3(in);
    case GateKind::Xnor: return !xor3(in);
    case GateKind::Not: return !in[0];
    case GateKind::Buffer: return in[0];
  }
  return LogicLevel::Undefined;
}

}  // namespace detail

/// Boolean function of `kind` lifted to three values: And/Nand treat a Low
/// input as dominating, Or/Nor a High input; Xor, Xnor, Not and Buffer are
/// strict in Undefined. Throws circuit_error(arity_mismatch) on a wrong
/// input count.
inline LogicLevel gate_function(GateKind kind, std::span<const LogicLevel> inputs) {
  if (inputs.size() != arity(kind)) {
    throw circuit_error(errc::arity_mismatch, std::string(gate_name(kind)) + " expects " +
                                                  std::to_string(arity(kind)) + " inputs, got " +
                                                  std::to_string(inputs.size()));
  }
  return detail::apply_gate(kind, inputs);
}

inline LogicLevel gate_function(GateKind kind, std::initializer_list<LogicLevel> inputs) {
  return gate_function(kind, std::span<const LogicLevel>(inputs.begin(), inputs.size()));
}

}  // namespace logicsim
