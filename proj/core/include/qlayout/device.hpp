#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlayout {

class DeviceError : public std::runtime_error {
 public:
  explicit DeviceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Undirected device connectivity graph.
struct CouplingGraph {
  std::string name;
  int width = 0;
  std::vector<std::pair<int, int>> edges;  // normalized a < b, sorted
  std::vector<std::vector<int>> adjacency; // sorted neighbor lists
  bool connected = true;                   // informational; loaders warn, never fail

  const std::vector<int>& adjacent(int q) const;
  int degree(int q) const;
  bool has_edge(int a, int b) const;
};

/// Validates and normalizes edges; throws DeviceError on out-of-range
/// endpoints, self-loops, or duplicate edges.
CouplingGraph make_coupling_graph(std::string name, int width,
                                  std::vector<std::pair<int, int>> edges);

/// Topology file: JSON {"name": ..., "width": N, "edges": [[a,b], ...]}.
CouplingGraph load_topology(const std::string& path);
CouplingGraph topology_from_json(const std::string& text,
                                 const std::string& label = "<topology>");
std::string write_topology(const CouplingGraph& graph);

/// Per-qubit and per-edge error rates. Missing entries default to 0 so that
/// calibration-free runs degrade every error tie-break to index order.
struct Calibration {
  int width = 0;
  std::vector<double> readout_error;
  std::vector<double> single_qubit_gate_error;
  std::map<std::pair<int, int>, double> two_qubit_gate_error;  // key a < b
  std::string timestamp;

  static Calibration zeros(int width);

  double readout(int q) const;
  double single_qubit(int q) const;
  double edge_error(int a, int b) const;  // symmetric
};

/// Calibration file: JSON {"qubits": [{"index", "readout_error",
/// "single_qubit_gate_error"}], "edges": [{"pair": [a,b],
/// "two_qubit_gate_error"}], "timestamp": ...}.
Calibration load_calibration(const std::string& path, const CouplingGraph& graph);
Calibration calibration_from_json(const std::string& text, const CouplingGraph& graph,
                                  const std::string& label = "<calibration>");

}  // namespace qlayout
