#pragma once

#include <optional>
#include <set>
#include <vector>

#include "qlayout/device.hpp"
#include "qlayout/layout.hpp"
#include "qlayout/qasm.hpp"
#include "qlayout/trace.hpp"

namespace qlayout {

/// One lead-plus-neighbors mapping action.
struct StepRecord {
  int round = 0;
  int lead_logical = -1;
  int lead_physical = -1;
  std::vector<std::pair<int, int>> assignments;  // (logical, physical), lead first
};

/// One outer-loop round of the substring strategy.
struct RoundRecord {
  int index = 0;
  std::int64_t trace_length = 0;
  std::int64_t lrnos_length = 0;
  std::vector<std::int64_t> occurrence_starts;
  double hist_mean = 0.0;
  std::vector<int> hiq;
  int mapped_qubits = 0;
  bool removed_occurrences = false;
};

struct MapperState {
  std::set<int> pending;     // logical qubits awaiting assignment
  std::set<int> available;   // physical qubits not yet used
  std::vector<QubitPair> edges;
  LinearizedTrace trace;
  std::vector<int> hiq;      // current round's high-impact qubits
  std::vector<StepRecord> steps;
  std::vector<RoundRecord> rounds;
};

/// Fresh state for a circuit on a device, excluding anything already fixed
/// by `seed`: pending holds the two-qubit-gate qubits not in the seed,
/// available the physical qubits the seed does not use.
MapperState make_mapper_state(const qasm::Circuit& circuit, const CouplingGraph& graph,
                              const LayoutMap& seed);

/// Mean first-operand frequency over the qubits appearing in the histogram.
double hiq_mean(const EdgeHistogram& hist);

/// Pending qubits whose first-operand frequency strictly exceeds the
/// histogram mean, ordered by frequency descending, ties by lower index.
std::vector<int> build_hiq_list(const EdgeHistogram& hist, const std::set<int>& pending);

/// Available physical qubit with the most still-available neighbors; ties by
/// lower mean edge error over available neighbors, then lower readout error,
/// then lower index. nullopt when no available qubit has an available
/// neighbor.
std::optional<int> select_lead_physical(const CouplingGraph& graph,
                                        const Calibration& calibration,
                                        const std::set<int>& available);

/// Lead logical qubit plus up to k-1 partners. With `hiq` non-null the lead
/// is the highest-frequency pending HIQ qubit; otherwise the
/// highest-frequency pending qubit of `local_hist`. Partners are pending
/// qubits ranked by pair count with the lead as first operand. A list
/// shorter than 2 means no mappable pair.
std::vector<int> select_logical_qubits(const std::set<int>& pending,
                                       const std::vector<int>* hiq,
                                       const EdgeHistogram& local_hist, int k);

/// Maps logical[0] to lead_physical and the remaining qubits one-to-one onto
/// the available neighbors of the lead, neighbors ordered by lead-edge error,
/// then readout error, then index. Qubits beyond neighbor capacity stay
/// pending. Updates layout and state, appending a StepRecord.
void map_qubits(const std::vector<int>& logical, int lead_physical,
                const CouplingGraph& graph, const Calibration& calibration,
                LayoutMap& layout, MapperState& state);

struct SsResult {
  LayoutMap layout;
  MapperState state;
};

/// Substring strategy: per round, find the longest repeating non-overlapping
/// substring, rank qubits within it, and map high-impact leads onto
/// well-connected physical qubits; rounds that map nothing remove the
/// substring occurrences and retry. Returns the partial layout plus the
/// surviving state for chaining.
SsResult map_by_ss(const qasm::Circuit& circuit, const CouplingGraph& graph,
                   const Calibration& calibration);

/// Global-frequency strategy over whatever `state` still has pending:
/// repeatedly restrict pairs to pending-pending, rebuild the histogram, and
/// map the heaviest lead onto the best-connected physical qubit.
LayoutMap map_by_gf(const qasm::Circuit& circuit, const CouplingGraph& graph,
                    const Calibration& calibration, LayoutMap seed,
                    MapperState& state);

/// Assigns every referenced-but-unmapped logical qubit: qubits by total gate
/// appearance descending, physical candidates by single-qubit-plus-readout
/// error ascending. Throws DeviceError when the device is too small.
LayoutMap map_fallback_single_qubit(const qasm::Circuit& circuit,
                                    const CouplingGraph& graph,
                                    const Calibration& calibration, LayoutMap layout);

/// Full pipeline for a method: SS, GF, or SS-then-GF (GSF), each completed
/// by the single-qubit fallback. Deterministic for identical inputs.
/// `diagnostics`, when non-null, receives the merged round/step logs.
LayoutMap map_circuit(const qasm::Circuit& circuit, const CouplingGraph& graph,
                      const Calibration& calibration, Method method,
                      MapperState* diagnostics = nullptr);

/// logical i -> physical i over the referenced qubits of the circuit.
LayoutMap identity_layout(const qasm::Circuit& circuit, int width);

}  // namespace qlayout
