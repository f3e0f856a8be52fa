#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logicsim/circuit.hpp"

// Line-oriented ".lgc" netlist format:
//
//   # half adder
//   input  A switch:on @ (0, 40)
//   gate   X xor
//   output S led
//   wire   A.out -> X.in0
//
// One statement per line, `#` starts a comment. Declaration order fixes
// element id order. Wires may name elements declared further down.

namespace logicsim {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;

  friend constexpr auto operator<=>(const SourceLocation&, const SourceLocation&) = default;
};

enum class ParseErrorKind : std::uint8_t {
  Syntax,
  UnknownKind,
  DuplicateName,
  UnknownName,
  BadPin,
  InputAlreadyDriven,
};

constexpr std::string_view parse_error_name(ParseErrorKind k) noexcept {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::UnknownKind: return "unknown_kind";
    case ParseErrorKind::DuplicateName: return "duplicate_name";
    case ParseErrorKind::UnknownName: return "unknown_name";
    case ParseErrorKind::BadPin: return "bad_pin";
    case ParseErrorKind::InputAlreadyDriven: break;
  }
  return "input_already_driven";
}

class parse_error : public std::runtime_error {
 public:
  parse_error(ParseErrorKind kind, SourceLocation loc, const std::string& message)
      : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
        kind_(kind),
        loc_(loc),
        message_(message) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  SourceLocation location() const noexcept { return loc_; }
  std::size_t line() const noexcept { return loc_.line; }
  std::size_t column() const noexcept { return loc_.column; }
  const std::string& message() const noexcept { return message_; }

 private:
  ParseErrorKind kind_;
  SourceLocation loc_;
  std::string message_;
};

struct Declaration {
  std::string name;
  ElementKind kind;
  std::optional<Position> position;
  SourceLocation location;  // of the name token
};

struct PinName {
  std::string element;
  std::string pin;
  SourceLocation location;  // of the element name
};

struct Wire {
  PinName from;
  PinName to;
};

/// Syntactic content of a netlist, before names are resolved.
struct NetlistDocument {
  std::vector<Declaration> declarations;
  std::vector<Wire> wires;
};

namespace detail {

inline bool is_ident_start(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_ident_char(char c) noexcept { return is_ident_start(c) || (c >= '0' && c <= '9'); }

inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

inline bool is_identifier(std::string_view s) noexcept {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

struct Token {
  enum class Type : std::uint8_t { Ident, Number, Punct, Arrow, End };
  Type type = Type::End;
  std::string_view text;
  std::size_t column = 1;
};

class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) { advance(); }

  const Token& peek() const noexcept { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  SourceLocation where(const Token& t) const noexcept { return {line_no_, t.column}; }

  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         ParseErrorKind kind = ParseErrorKind::Syntax) const {
    throw parse_error(kind, where(t), msg);
  }

  Token expect_ident(std::string_view what) {
    if (peek().type != Token::Type::Ident) fail(peek(), "expected " + std::string(what));
    return next();
  }

  void expect_punct(char c) {
    if (peek().type != Token::Type::Punct || peek().text.front() != c) {
      fail(peek(), std::string("expected '") + c + "'");
    }
    next();
  }

  bool accept_punct(char c) {
    if (peek().type == Token::Type::Punct && peek().text.front() == c) {
      next();
      return true;
    }
    return false;
  }

  double expect_number() {
    const auto& t = peek();
    if (t.type != Token::Type::Number) fail(t, "expected a number");
    double v = 0.0;
    auto first = t.text.data(), last = t.text.data() + t.text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) fail(t, "malformed number");
    next();
    return v;
  }

  void expect_end() {
    if (peek().type != Token::Type::End) fail(peek(), "unexpected trailing input");
  }

 private:
  void advance() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    current_.column = pos_ + 1;
    if (pos_ >= line_.size()) {
      current_.type = Token::Type::End;
      current_.text = {};
      return;
    }
    const auto start = pos_;
    const char c = line_[pos_];
    auto at = [&](std::size_t i) { return i < line_.size() ? line_[i] : '\0'; };
    if (is_ident_start(c)) {
      while (pos_ < line_.size() && is_ident_char(line_[pos_])) ++pos_;
      current_.type = Token::Type::Ident;
    } else if (c == '-' && at(pos_ + 1) == '>') {
      pos_ += 2;
      current_.type = Token::Type::Arrow;
    } else if (is_digit(c) || ((c == '-' || c == '+' || c == '.') &&
                               (is_digit(at(pos_ + 1)) || (at(pos_ + 1) == '.' && is_digit(at(pos_ + 2)))))) {
      ++pos_;
      while (pos_ < line_.size()) {
        char d = line_[pos_];
        if (is_digit(d) || d == '.') {
          ++pos_;
        } else if ((d == 'e' || d == 'E')) {
          ++pos_;
          if (at(pos_) == '+' || at(pos_) == '-') ++pos_;
        } else {
          break;
        }
      }
      current_.type = Token::Type::Number;
    } else if (c == '@' || c == '(' || c == ')' || c == ',' || c == '.' || c == ':') {
      ++pos_;
      current_.type = Token::Type::Punct;
    } else {
      throw parse_error(ParseErrorKind::Syntax, {line_no_, start + 1},
                        std::string("unexpected character '") + c + "'");
    }
    current_.text = line_.substr(start, pos_ - start);
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
  Token current_;
};

inline std::optional<Position> parse_position(LineLexer& lx) {
  if (!lx.accept_punct('@')) return std::nullopt;
  lx.expect_punct('(');
  Position p;
  p.x = lx.expect_number();
  lx.expect_punct(',');
  p.y = lx.expect_number();
  lx.expect_punct(')');
  return p;
}

inline PinName parse_pin_name(LineLexer& lx) {
  auto element = lx.expect_ident("element name");
  lx.expect_punct('.');
  auto pin = lx.expect_ident("pin name");
  return {std::string(element.text), std::string(pin.text), lx.where(element)};
}

inline void parse_statement(LineLexer& lx, NetlistDocument& doc) {
  auto keyword = lx.expect_ident("a statement keyword (input, gate, output, wire)");
  if (keyword.text == "wire") {
    Wire w;
    w.from = parse_pin_name(lx);
    if (lx.peek().type != Token::Type::Arrow) lx.fail(lx.peek(), "expected '->'");
    lx.next();
    w.to = parse_pin_name(lx);
    lx.expect_end();
    doc.wires.push_back(std::move(w));
    return;
  }
  if (keyword.text != "input" && keyword.text != "gate" && keyword.text != "output") {
    lx.fail(keyword, "unknown statement '" + std::string(keyword.text) + "'");
  }

  auto name = lx.expect_ident("element name");
  auto kind_tok = lx.expect_ident("element kind");
  Declaration decl{std::string(name.text), GateKind::And, std::nullopt, lx.where(name)};
  const auto unknown = [&](std::string_view family) {
    lx.fail(kind_tok, "unknown " + std::string(family) + " kind '" + std::string(kind_tok.text) + "'",
            ParseErrorKind::UnknownKind);
  };

  if (keyword.text == "input") {
    auto type = input_from_name(kind_tok.text);
    if (!type) unknown("input");
    InputKind in{*type, false};
    if (lx.accept_punct(':')) {
      auto state = lx.expect_ident("switch state (on or off)");
      if (!in.is_switch()) lx.fail(state, "only switches carry a state");
      if (state.text == "on") {
        in.on = true;
      } else if (state.text != "off") {
        lx.fail(state, "switch state must be 'on' or 'off'");
      }
    }
    decl.kind = in;
  } else if (keyword.text == "gate") {
    auto g = gate_from_name(kind_tok.text);
    if (!g) unknown("gate");
    decl.kind = *g;
  } else {
    auto o = output_from_name(kind_tok.text);
    if (!o) unknown("output");
    decl.kind = *o;
  }
  decl.position = parse_position(lx);
  lx.expect_end();
  doc.declarations.push_back(std::move(decl));
}

// "out" / "in" are aliases for index 0; "outN" / "inN" name index N.
inline std::optional<PinRef> resolve_pin(ElementId id, std::string_view pin) {
  PinDirection dir;
  std::string_view digits;
  if (pin.starts_with("out")) {
    dir = PinDirection::Out;
    digits = pin.substr(3);
  } else if (pin.starts_with("in")) {
    dir = PinDirection::In;
    digits = pin.substr(2);
  } else {
    return std::nullopt;
  }
  unsigned index = 0;
  if (!digits.empty()) {
    if (digits.size() > 2 || (digits.size() > 1 && digits.front() == '0')) return std::nullopt;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  }
  return PinRef{id, dir, static_cast<std::uint8_t>(index)};
}

}  // namespace detail

/// Tokenizes and checks statement syntax. Duplicate names are reported here;
/// wire endpoints are resolved by build().
inline NetlistDocument parse_document(std::string_view text) {
  NetlistDocument doc;
  std::unordered_map<std::string, SourceLocation> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  for (;;) {
    ++line_no;
    const auto eol = text.find('\n', start);
    auto line = text.substr(start, eol == std::string_view::npos ? std::string_view::npos : eol - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    detail::LineLexer lx(line, line_no);
    if (lx.peek().type != detail::Token::Type::End) {
      const auto before = doc.declarations.size();
      detail::parse_statement(lx, doc);
      if (doc.declarations.size() != before) {
        const auto& d = doc.declarations.back();
        if (auto [it, fresh] = seen.emplace(d.name, d.location); !fresh) {
          throw parse_error(ParseErrorKind::DuplicateName, d.location,
                            "duplicate name '" + d.name + "' (first declared on line " +
                                std::to_string(it->second.line) + ")");
        }
      }
    }
    if (eol == std::string_view::npos) break;
    start = eol + 1;
  }
  return doc;
}

/// Resolves names and pins and builds the circuit. Ids follow declaration order.
inline Circuit build(const NetlistDocument& doc) {
  Circuit c;
  std::unordered_map<std::string, ElementId> ids;
  for (const auto& d : doc.declarations) {
    if (ids.contains(d.name)) {
      throw parse_error(ParseErrorKind::DuplicateName, d.location, "duplicate name '" + d.name + "'");
    }
    ids.emplace(d.name, c.add_element(d.kind, d.position.value_or(Position{}), d.name));
  }

  auto resolve = [&](const PinName& p, PinDirection expected) {
    auto it = ids.find(p.element);
    if (it == ids.end()) {
      throw parse_error(ParseErrorKind::UnknownName, p.location, "unknown element '" + p.element + "'");
    }
    auto pin = detail::resolve_pin(it->second, p.pin);
    const auto label = p.element + "." + p.pin;
    if (!pin) throw parse_error(ParseErrorKind::BadPin, p.location, "unknown pin '" + label + "'");
    if (pin->direction != expected) {
      throw parse_error(ParseErrorKind::BadPin, p.location,
                        "'" + label + "' is an " + (expected == PinDirection::Out ? "input" : "output") +
                            " pin; wires run from an output to an input");
    }
    if (!c.valid_pin(*pin)) {
      throw parse_error(ParseErrorKind::BadPin, p.location, "element has no pin '" + label + "'");
    }
    return *pin;
  };

  for (const auto& w : doc.wires) {
    auto from = resolve(w.from, PinDirection::Out);
    auto to = resolve(w.to, PinDirection::In);
    if (c.driver_of(to)) {
      throw parse_error(ParseErrorKind::InputAlreadyDriven, w.to.location,
                        "'" + w.to.element + "." + w.to.pin + "' already has a driver");
    }
    c.connect(from, to);
  }
  return c;
}

inline Circuit parse(std::string_view text) { return build(parse_document(text)); }

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string name_prefix(const Element& e) {
  if (e.is_gate()) return "g";
  if (e.is_switch()) return "sw";
  if (e.is_input()) return "k";
  return "y";
}

}  // namespace detail

/// Name each element will carry in serialized form: its own name when that
/// is a unique identifier, otherwise a generated `<prefix><id>`.
inline std::map<ElementId, std::string> element_names(const Circuit& c) {
  std::map<ElementId, std::string> names;
  std::set<std::string> used;
  for (const auto& [id, e] : c.elements()) {
    if (detail::is_identifier(e.name) && used.insert(e.name).second) names.emplace(id, e.name);
  }
  for (const auto& [id, e] : c.elements()) {
    if (names.contains(id)) continue;
    std::string base = detail::name_prefix(e) + std::to_string(id.value);
    std::string candidate = base;
    for (int k = 1; used.contains(candidate); ++k) candidate = base + "_" + std::to_string(k);
    used.insert(candidate);
    names.emplace(id, candidate);
  }
  return names;
}

inline std::string pin_label(const Element& e, const PinRef& p) {
  if (p.direction == PinDirection::Out) return p.index == 0 ? "out" : "out" + std::to_string(p.index);
  if (e.inputs() == 1 && p.index == 0) return "in";
  return "in" + std::to_string(p.index);
}

/// Canonical text: declarations by ascending id, then wires by destination.
inline std::string serialize(const Circuit& c) {
  const auto names = element_names(c);
  std::string out;
  for (const auto& [id, e] : c.elements()) {
    std::string kind(kind_name(e.kind));
    const char* keyword = e.is_gate() ? "gate" : e.is_input() ? "input" : "output";
    if (e.is_switch() && std::get<InputKind>(e.kind).on) kind += ":on";
    out += keyword;
    out += ' ';
    out += names.at(id);
    out += ' ';
    out += kind;
    if (e.position.x != 0.0 || e.position.y != 0.0) {
      out += " @ (" + detail::format_number(e.position.x) + ", " + detail::format_number(e.position.y) + ")";
    }
    out += '\n';
  }
  if (!c.empty() && c.connection_count() > 0) out += '\n';
  for (const auto& [to, from] : c.drivers()) {
    out += "wire " + names.at(from.element) + "." + pin_label(c.element(from.element), from) + " -> " +
           names.at(to.element) + "." + pin_label(c.element(to.element), to) + "\n";
  }
  return out;
}

}  // namespace logicsim
