#include "qlayout/device.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qlayout {
namespace {

std::pair<int, int> norm_edge(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DeviceError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_connected(int width, const std::vector<std::vector<int>>& adjacency) {
  if (width == 0) return true;
  std::vector<char> seen(width, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == width;
}

}  // namespace

const std::vector<int>& CouplingGraph::adjacent(int q) const {
  if (q < 0 || q >= width) {
    throw DeviceError("physical qubit index " + std::to_string(q) +
                      " out of range for device '" + name + "' of width " +
                      std::to_string(width));
  }
  return adjacency[q];
}

int CouplingGraph::degree(int q) const { return static_cast<int>(adjacent(q).size()); }

bool CouplingGraph::has_edge(int a, int b) const {
  if (a < 0 || a >= width || b < 0 || b >= width) return false;
  auto e = norm_edge(a, b);
  return std::binary_search(edges.begin(), edges.end(), e);
}

CouplingGraph make_coupling_graph(std::string name, int width,
                                  std::vector<std::pair<int, int>> edges) {
  if (width < 0) throw DeviceError("device width must be non-negative");
  CouplingGraph g;
  g.name = std::move(name);
  g.width = width;
  for (auto& [a, b] : edges) {
    if (a == b) {
      throw DeviceError("self-loop edge on qubit " + std::to_string(a));
    }
    if (a < 0 || b < 0 || a >= width || b >= width) {
      throw DeviceError("edge endpoint out of range: [" + std::to_string(a) + "," +
                        std::to_string(b) + "] with width " + std::to_string(width));
    }
  }
  for (auto& [a, b] : edges) g.edges.push_back(norm_edge(a, b));
  std::sort(g.edges.begin(), g.edges.end());
  auto dup = std::adjacent_find(g.edges.begin(), g.edges.end());
  if (dup != g.edges.end()) {
    throw DeviceError("duplicate edge [" + std::to_string(dup->first) + "," +
                      std::to_string(dup->second) + "]");
  }
  g.adjacency.assign(width, {});
  for (const auto& [a, b] : g.edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
  g.connected = is_connected(width, g.adjacency);
  return g;
}

CouplingGraph topology_from_json(const std::string& text, const std::string& label) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DeviceError(label + ": malformed topology JSON: " + e.what());
  }
  try {
    std::string name = doc.value("name", label);
    int width = doc.at("width").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw DeviceError(label + ": each edge must be a [a, b] pair");
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return make_coupling_graph(std::move(name), width, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw DeviceError(label + ": malformed topology JSON: " + e.what());
  }
}

CouplingGraph load_topology(const std::string& path) {
  return topology_from_json(read_file(path), path);
}

std::string write_topology(const CouplingGraph& graph) {
  nlohmann::ordered_json doc;
  doc["name"] = graph.name;
  doc["width"] = graph.width;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({a, b});
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

Calibration Calibration::zeros(int width) {
  Calibration c;
  c.width = width;
  c.readout_error.assign(width, 0.0);
  c.single_qubit_gate_error.assign(width, 0.0);
  return c;
}

double Calibration::readout(int q) const {
  if (q < 0 || q >= static_cast<int>(readout_error.size())) return 0.0;
  return readout_error[q];
}

double Calibration::single_qubit(int q) const {
  if (q < 0 || q >= static_cast<int>(single_qubit_gate_error.size())) return 0.0;
  return single_qubit_gate_error[q];
}

double Calibration::edge_error(int a, int b) const {
  auto it = two_qubit_gate_error.find(norm_edge(a, b));
  return it == two_qubit_gate_error.end() ? 0.0 : it->second;
}

namespace {

double checked_probability(double value, const std::string& label,
                           const std::string& what) {
  if (value < 0.0 || value > 1.0) {
    throw DeviceError(label + ": " + what + " " + std::to_string(value) +
                      " outside [0,1]");
  }
  return value;
}

}  // namespace

Calibration calibration_from_json(const std::string& text, const CouplingGraph& graph,
                                  const std::string& label) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DeviceError(label + ": malformed calibration JSON: " + e.what());
  }
  Calibration cal = Calibration::zeros(graph.width);
  try {
    cal.timestamp = doc.value("timestamp", "");
    if (doc.contains("qubits")) {
      for (const auto& q : doc["qubits"]) {
        int index = q.at("index").get<int>();
        if (index < 0 || index >= graph.width) {
          throw DeviceError(label + ": calibration qubit index " +
                            std::to_string(index) + " out of range");
        }
        if (q.contains("readout_error")) {
          cal.readout_error[index] = checked_probability(
              q["readout_error"].get<double>(), label, "readout_error");
        }
        if (q.contains("single_qubit_gate_error")) {
          cal.single_qubit_gate_error[index] =
              checked_probability(q["single_qubit_gate_error"].get<double>(), label,
                                  "single_qubit_gate_error");
        }
      }
    }
    if (doc.contains("edges")) {
      for (const auto& e : doc["edges"]) {
        const auto& pair = e.at("pair");
        int a = pair.at(0).get<int>();
        int b = pair.at(1).get<int>();
        if (!graph.has_edge(a, b)) {
          throw DeviceError(label + ": calibration edge [" + std::to_string(a) + "," +
                            std::to_string(b) + "] not in device '" + graph.name + "'");
        }
        cal.two_qubit_gate_error[norm_edge(a, b)] = checked_probability(
            e.at("two_qubit_gate_error").get<double>(), label, "two_qubit_gate_error");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DeviceError(label + ": malformed calibration JSON: " + e.what());
  }
  return cal;
}

Calibration load_calibration(const std::string& path, const CouplingGraph& graph) {
  return calibration_from_json(read_file(path), graph, path);
}

}  // namespace qlayout
