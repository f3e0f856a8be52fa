#pragma once

#include <cstdint>
#include <vector>

#include "logicsim/evaluate.hpp"

namespace logicsim {

inline constexpr std::size_t default_table_input_cap = 16;

struct TruthTable {
  struct Row {
    std::vector<bool> inputs;
    std::vector<LogicLevel> outputs;

    friend bool operator==(const Row&, const Row&) = default;
  };

  std::vector<ElementId> inputs;   // switches, ascending id
  std::vector<ElementId> outputs;  // indicators, ascending id
  std::vector<Row> rows;           // binary counting order, first input is the MSB

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

/// Enumerates every switch assignment and records the indicator levels.
/// Constants stay fixed. The caller's circuit is not modified.
inline TruthTable truth_table(const Circuit& circuit, std::size_t cap = default_table_input_cap) {
  TruthTable table;
  table.inputs = circuit.switches();
  table.outputs = circuit.indicators();
  const auto n = table.inputs.size();
  if (n > cap || n >= 63) {
    throw circuit_error(errc::too_many_inputs, "circuit has " + std::to_string(n) +
                                                   " switches, table cap is " + std::to_string(cap));
  }

  Circuit work = circuit;
  const std::uint64_t count = std::uint64_t{1} << n;
  table.rows.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    TruthTable::Row row;
    row.inputs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool on = (bits >> (n - 1 - i)) & 1U;
      row.inputs[i] = on;
      work.set_switch(table.inputs[i], on);
    }
    auto eval = evaluate(work);
    row.outputs.reserve(table.outputs.size());
    for (auto id : table.outputs) {
      auto d = work.driver_of(PinRef::in(id));
      row.outputs.push_back(d ? eval.level(*d) : LogicLevel::Undefined);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace logicsim
