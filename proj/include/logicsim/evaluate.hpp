#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <vector>

#include "logicsim/circuit.hpp"

namespace logicsim {

struct Diagnostic {
  enum class Kind : std::uint8_t { FloatingInput, CombinationalCycle };

  Kind kind = Kind::FloatingInput;
  std::vector<ElementId> elements;
  std::vector<PinRef> pins;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

constexpr std::string_view diagnostic_name(Diagnostic::Kind k) noexcept {
  return k == Diagnostic::Kind::FloatingInput ? "floating_input" : "combinational_cycle";
}

enum class IndicatorState : std::uint8_t { Off, On, Undefined };

constexpr IndicatorState indicator_from(LogicLevel l) noexcept {
  switch (l) {
    case LogicLevel::Low: return IndicatorState::Off;
    case LogicLevel::High: return IndicatorState::On;
    case LogicLevel::Undefined: break;
  }
  return IndicatorState::Undefined;
}

constexpr std::string_view indicator_name(IndicatorState s) noexcept {
  switch (s) {
    case IndicatorState::Off: return "off";
    case IndicatorState::On: return "on";
    case IndicatorState::Undefined: break;
  }
  return "undefined";
}

struct EvalResult {
  std::map<PinRef, LogicLevel> levels;            // every Out pin
  std::map<ElementId, IndicatorState> indicators;  // every output element
  std::vector<Diagnostic> diagnostics;

  LogicLevel level(const PinRef& out) const {
    auto it = levels.find(out);
    return it == levels.end() ? LogicLevel::Undefined : it->second;
  }

  LogicLevel level(ElementId id) const { return level(PinRef::out(id)); }

  IndicatorState indicator(ElementId id) const {
    auto it = indicators.find(id);
    return it == indicators.end() ? IndicatorState::Undefined : it->second;
  }

  bool has(Diagnostic::Kind k) const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [k](const Diagnostic& d) { return d.kind == k; });
  }

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

namespace detail {

// Dense view of the element graph: one node per element, one edge per
// connection (parallel edges kept), indexed in ascending id order.
struct ElementGraph {
  std::vector<const Element*> nodes;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::vector<std::size_t>> pred;

  explicit ElementGraph(const Circuit& c) {
    nodes.reserve(c.size());
    for (const auto& [id, e] : c.elements()) nodes.push_back(&e);
    succ.resize(nodes.size());
    pred.resize(nodes.size());
    for (const auto& [to, from] : c.drivers()) {
      auto u = index_of(from.element), v = index_of(to.element);
      succ[u].push_back(v);
      pred[v].push_back(u);
    }
  }

  std::size_t index_of(ElementId id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const Element* e, ElementId x) { return e->id < x; });
    return static_cast<std::size_t>(it - nodes.begin());
  }
};

// Strongly connected components of the subgraph induced by `member`.
// Returns only components that contain a cycle (size > 1 or a self-edge).
inline std::vector<std::vector<std::size_t>> cyclic_components(const ElementGraph& g,
                                                               const std::vector<bool>& member) {
  const auto n = g.nodes.size();
  constexpr auto unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  // Iterative Tarjan; frames hold (node, next successor position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (!member[root] || index[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < g.succ[v].size()) {
        auto w = g.succ[v][pos++];
        if (!member[w]) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        bool self_loop = std::find(g.succ[v].begin(), g.succ[v].end(), v) != g.succ[v].end();
        if (comp.size() > 1 || self_loop) {
          std::sort(comp.begin(), comp.end());
          out.push_back(std::move(comp));
        }
      }
      auto finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        auto parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Propagates levels through the circuit in topological order.
///
/// Sources emit their level; each gate fires once all of its drivers are
/// resolved. Undriven gate and indicator inputs read Undefined and are
/// reported as FloatingInput. Elements left over by the topological sort are
/// split into strongly connected components: elements on a cycle emit
/// Undefined and are reported as CombinationalCycle, and anything merely
/// downstream of a cycle is evaluated normally afterwards.
inline EvalResult evaluate(const Circuit& circuit) {
  EvalResult result;
  detail::ElementGraph g(circuit);
  const auto n = g.nodes.size();
  std::vector<LogicLevel> out(n, LogicLevel::Undefined);

  auto input_level = [&](const Element& e, std::size_t pin) {
    auto d = circuit.driver_of(PinRef::in(e.id, static_cast<std::uint8_t>(pin)));
    if (!d) return LogicLevel::Undefined;
    return out[g.index_of(d->element)];
  };

  auto fire = [&](std::size_t i) {
    const Element& e = *g.nodes[i];
    if (auto gate = std::get_if<GateKind>(&e.kind)) {
      std::array<LogicLevel, 2> in{};
      const auto k = arity(*gate);
      for (std::size_t p = 0; p < k; ++p) in[p] = input_level(e, p);
      out[i] = detail::apply_gate(*gate, std::span<const LogicLevel>(in.data(), k));
    } else if (auto src = std::get_if<InputKind>(&e.kind)) {
      out[i] = src->level();
    }
  };

  // Kahn over the nodes selected by `pending`, counting only edges whose
  // source is itself still pending.
  auto propagate = [&](std::vector<bool>& pending) {
    std::vector<std::size_t> indeg(n, 0);
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
      if (!pending[v]) continue;
      for (auto u : g.pred[v]) indeg[v] += pending[u] ? 1 : 0;
      if (indeg[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
      auto v = ready.front();
      ready.pop_front();
      fire(v);
      pending[v] = false;
      for (auto w : g.succ[v]) {
        if (pending[w] && --indeg[w] == 0) ready.push_back(w);
      }
    }
  };

  for (const auto* e : g.nodes) {
    for (std::size_t p = 0; p < e->inputs(); ++p) {
      auto pin = PinRef::in(e->id, static_cast<std::uint8_t>(p));
      if (!circuit.driver_of(pin)) {
        result.diagnostics.push_back({Diagnostic::Kind::FloatingInput, {e->id}, {pin}});
      }
    }
  }

  std::vector<bool> pending(n, true);
  propagate(pending);

  if (std::find(pending.begin(), pending.end(), true) != pending.end()) {
    for (const auto& comp : detail::cyclic_components(g, pending)) {
      Diagnostic d{Diagnostic::Kind::CombinationalCycle, {}, {}};
      for (auto v : comp) {
        pending[v] = false;
        out[v] = LogicLevel::Undefined;
        d.elements.push_back(g.nodes[v]->id);
        if (g.nodes[v]->outputs() > 0) d.pins.push_back(PinRef::out(g.nodes[v]->id));
      }
      result.diagnostics.push_back(std::move(d));
    }
    propagate(pending);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Element& e = *g.nodes[i];
    if (e.outputs() > 0) result.levels.emplace(PinRef::out(e.id), out[i]);
    if (e.is_output()) result.indicators.emplace(e.id, indicator_from(input_level(e, 0)));
  }
  return result;
}

}  // namespace logicsim
