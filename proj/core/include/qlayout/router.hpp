#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlayout/device.hpp"
#include "qlayout/layout.hpp"
#include "qlayout/qasm.hpp"

namespace qlayout {

class RoutingError : public std::runtime_error {
 public:
  explicit RoutingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RoutedGate {
  std::string opcode;
  std::vector<std::string> params;
  std::vector<double> param_values;
  std::vector<int> qubits;  // physical indices
  std::vector<qasm::RegRef> clbits;
  std::optional<qasm::Condition> condition;
  qasm::GateKind kind = qasm::GateKind::Gate;
  bool inserted_swap = false;
  int source_gate = -1;  // index into the input circuit, -1 for swaps
};

struct RoutedCircuit {
  int width = 0;
  std::vector<RoutedGate> gates;
  long swap_count = 0;
  std::map<int, int> final_placement;  // logical -> physical after all swaps
};

/// Greedy swap insertion: gates are processed in order; a two-qubit gate on
/// non-adjacent physical operands gets swaps along the lexicographically
/// smallest shortest path, moving the first operand's state next to the
/// second. No lookahead. Throws RoutingError on unmapped operands or
/// disconnected endpoints.
RoutedCircuit route(const qasm::Circuit& circuit, const LayoutMap& layout,
                    const CouplingGraph& graph);

struct Metrics {
  long depth = 0;        // gates on the longest shared-qubit chain
  long gate_volume = 0;  // counted gates (barriers and measures excluded)
  long swap_count = 0;
};

Metrics compute_metrics(const qasm::Circuit& circuit);
/// decompose_swaps counts each swap as 3 gates of volume (CX-basis figure).
Metrics compute_metrics(const RoutedCircuit& routed, bool decompose_swaps = false);

struct CompareRow {
  std::string label;
  Metrics metrics;
  double depth_ratio = 0.0;   // baseline depth / this depth; > 1 is better
  double volume_ratio = 0.0;  // baseline volume / this volume; > 1 is better
  long swap_delta = 0;        // baseline swaps - this swaps; positive is better
};

struct CompareReport {
  std::string circuit;
  std::string baseline;
  std::vector<CompareRow> rows;  // rows[0] is the baseline
};

/// Routes the circuit under each layout and reports absolute metrics plus
/// ratios against layouts[0] (the baseline).
CompareReport compare_layouts(const qasm::Circuit& circuit,
                              const std::vector<std::pair<std::string, LayoutMap>>& layouts,
                              const CouplingGraph& graph,
                              bool decompose_swaps = false);

std::string compare_report_json(const CompareReport& report);
std::string compare_report_table(const CompareReport& report);

}  // namespace qlayout
