#include "qlayout/router.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace qlayout {

namespace {

// Lexicographically smallest shortest path from a to b: BFS distances from
// b, then walk from a always taking the lowest-index neighbor downhill.
std::vector<int> lex_shortest_path(const CouplingGraph& graph, int a, int b) {
  std::vector<int> dist(graph.width, -1);
  std::deque<int> queue{b};
  dist[b] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : graph.adjacent(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  if (dist[a] < 0) {
    throw RoutingError("physical qubits " + std::to_string(a) + " and " +
                       std::to_string(b) + " are disconnected on device '" +
                       graph.name + "'");
  }
  std::vector<int> path{a};
  int v = a;
  while (v != b) {
    for (int w : graph.adjacent(v)) {  // adjacency lists are sorted
      if (dist[w] == dist[v] - 1) {
        v = w;
        break;
      }
    }
    path.push_back(v);
  }
  return path;
}

}  // namespace

RoutedCircuit route(const qasm::Circuit& circuit, const LayoutMap& layout,
                    const CouplingGraph& graph) {
  RoutedCircuit out;
  out.width = graph.width;

  std::vector<int> phys_of(std::max(circuit.qubit_count(), 1), -1);
  std::vector<int> log_at(graph.width, -1);
  for (const auto& [logical, physical] : layout.assignment()) {
    if (physical >= graph.width) {
      throw RoutingError("layout maps logical qubit " + std::to_string(logical) +
                         " to physical " + std::to_string(physical) +
                         " beyond device width " + std::to_string(graph.width));
    }
    if (logical < static_cast<int>(phys_of.size())) {
      phys_of[logical] = physical;
      log_at[physical] = logical;
    }
  }

  auto physical_of = [&](int logical) {
    int p = phys_of[logical];
    if (p < 0) {
      throw RoutingError("logical qubit " + std::to_string(logical) +
                         " is unmapped but used by the circuit");
    }
    return p;
  };

  auto emit_swap = [&](int pa, int pb) {
    RoutedGate swap;
    swap.opcode = "swap";
    swap.qubits = {pa, pb};
    swap.inserted_swap = true;
    out.gates.push_back(std::move(swap));
    ++out.swap_count;
    int la = log_at[pa];
    int lb = log_at[pb];
    std::swap(log_at[pa], log_at[pb]);
    if (la >= 0) phys_of[la] = pb;
    if (lb >= 0) phys_of[lb] = pa;
  };

  for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
    const auto& g = circuit.gates[gi];
    RoutedGate rg;
    rg.opcode = g.opcode;
    rg.params = g.params;
    rg.param_values = g.param_values;
    rg.clbits = g.clbits;
    rg.condition = g.condition;
    rg.kind = g.kind;
    rg.source_gate = static_cast<int>(gi);

    if (g.kind == qasm::GateKind::Barrier) {
      for (const auto& q : g.qubits) {
        int p = phys_of[circuit.flat_qubit(q)];
        if (p >= 0) rg.qubits.push_back(p);
      }
      out.gates.push_back(std::move(rg));
      continue;
    }

    if (g.kind == qasm::GateKind::Gate && g.qubits.size() == 2) {
      int la = circuit.flat_qubit(g.qubits[0]);
      int lb = circuit.flat_qubit(g.qubits[1]);
      int pa = physical_of(la);
      int pb = physical_of(lb);
      if (pa != pb && !graph.has_edge(pa, pb)) {
        std::vector<int> path = lex_shortest_path(graph, pa, pb);
        for (std::size_t k = 0; k + 2 < path.size(); ++k) {
          emit_swap(path[k], path[k + 1]);
        }
        pa = phys_of[la];
        pb = phys_of[lb];
      }
      rg.qubits = {pa, pb};
      out.gates.push_back(std::move(rg));
      continue;
    }

    for (const auto& q : g.qubits) {
      rg.qubits.push_back(physical_of(circuit.flat_qubit(q)));
    }
    out.gates.push_back(std::move(rg));
  }

  for (int p = 0; p < graph.width; ++p) {
    if (log_at[p] >= 0) out.final_placement.emplace(log_at[p], p);
  }
  return out;
}

namespace {

// Depth via per-qubit frontiers: a counted gate starts one tick after the
// latest gate sharing any of its qubits.
struct MetricsAccumulator {
  std::map<int, long> frontier;
  Metrics metrics;

  void add(bool counted, bool is_swap, const std::vector<int>& qubits) {
    if (!counted) return;
    ++metrics.gate_volume;
    if (is_swap) ++metrics.swap_count;
    long start = 0;
    for (int q : qubits) {
      auto it = frontier.find(q);
      if (it != frontier.end()) start = std::max(start, it->second);
    }
    long finish = start + 1;
    for (int q : qubits) frontier[q] = finish;
    metrics.depth = std::max(metrics.depth, finish);
  }
};

bool metric_counted(qasm::GateKind kind) {
  return kind != qasm::GateKind::Barrier && kind != qasm::GateKind::Measure;
}

}  // namespace

Metrics compute_metrics(const qasm::Circuit& circuit) {
  MetricsAccumulator acc;
  for (const auto& g : circuit.gates) {
    std::vector<int> qubits;
    qubits.reserve(g.qubits.size());
    for (const auto& q : g.qubits) qubits.push_back(circuit.flat_qubit(q));
    acc.add(metric_counted(g.kind), g.opcode == "swap", qubits);
  }
  return acc.metrics;
}

Metrics compute_metrics(const RoutedCircuit& routed, bool decompose_swaps) {
  MetricsAccumulator acc;
  for (const auto& g : routed.gates) {
    acc.add(metric_counted(g.kind), g.opcode == "swap", g.qubits);
  }
  Metrics m = acc.metrics;
  if (decompose_swaps) m.gate_volume += 2 * m.swap_count;
  return m;
}

CompareReport compare_layouts(const qasm::Circuit& circuit,
                              const std::vector<std::pair<std::string, LayoutMap>>& layouts,
                              const CouplingGraph& graph, bool decompose_swaps) {
  if (layouts.empty()) {
    throw std::invalid_argument("compare_layouts needs at least one layout");
  }
  CompareReport report;
  report.circuit = circuit.source_name;
  report.baseline = layouts.front().first;
  for (const auto& [label, layout] : layouts) {
    CompareRow row;
    row.label = label;
    row.metrics = compute_metrics(route(circuit, layout, graph), decompose_swaps);
    report.rows.push_back(std::move(row));
  }
  const Metrics& base = report.rows.front().metrics;
  for (auto& row : report.rows) {
    row.depth_ratio = (base.depth == 0 && row.metrics.depth == 0)
                          ? 1.0
                          : static_cast<double>(base.depth) / row.metrics.depth;
    row.volume_ratio =
        (base.gate_volume == 0 && row.metrics.gate_volume == 0)
            ? 1.0
            : static_cast<double>(base.gate_volume) / row.metrics.gate_volume;
    row.swap_delta = base.swap_count - row.metrics.swap_count;
  }
  return report;
}

std::string compare_report_json(const CompareReport& report) {
  nlohmann::ordered_json doc;
  doc["circuit"] = report.circuit;
  doc["baseline"] = report.baseline;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["label"] = row.label;
    r["depth"] = row.metrics.depth;
    r["volume"] = row.metrics.gate_volume;
    r["swaps"] = row.metrics.swap_count;
    r["depth_ratio"] = row.depth_ratio;
    r["volume_ratio"] = row.volume_ratio;
    r["swap_delta"] = row.swap_delta;
    rows.push_back(std::move(r));
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string compare_report_table(const CompareReport& report) {
  std::ostringstream os;
  os << "circuit: " << report.circuit << "  (baseline: " << report.baseline << ")\n";
  os << std::left << std::setw(12) << "label" << std::right << std::setw(10) << "depth"
     << std::setw(10) << "volume" << std::setw(8) << "swaps" << std::setw(10)
     << "d-ratio" << std::setw(10) << "v-ratio" << std::setw(10) << "d-swaps"
     << "\n";
  for (const auto& row : report.rows) {
    os << std::left << std::setw(12) << row.label << std::right << std::setw(10)
       << row.metrics.depth << std::setw(10) << row.metrics.gate_volume << std::setw(8)
       << row.metrics.swap_count << std::setw(10) << std::fixed << std::setprecision(2)
       << row.depth_ratio << std::setw(10) << row.volume_ratio << std::setw(10)
       << row.swap_delta << "\n";
  }
  return os.str();
}

}  // namespace qlayout
