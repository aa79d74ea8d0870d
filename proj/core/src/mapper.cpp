#include "qlayout/mapper.hpp"

#include <algorithm>
#include <optional>

namespace qlayout {

MapperState make_mapper_state(const qasm::Circuit& circuit, const CouplingGraph& graph,
                              const LayoutMap& seed) {
  MapperState st;
  std::vector<QubitPair> pairs = extract_pairs(circuit);
  std::vector<std::int32_t> gate_indices = pair_gate_indices(circuit);
  st.trace = linearize(pairs, graph.width, gate_indices);
  for (const auto& p : pairs) {
    st.pending.insert(p.control);
    st.pending.insert(p.target);
  }
  st.edges = std::move(pairs);
  for (const auto& [logical, physical] : seed.assignment()) {
    (void)physical;
    st.pending.erase(logical);
  }
  for (int q = 0; q < graph.width; ++q) {
    if (!seed.physical_used(q)) st.available.insert(q);
  }
  return st;
}

double hiq_mean(const EdgeHistogram& hist) {
  if (hist.touched.empty()) return 0.0;
  return static_cast<double>(hist.total_pairs) /
         static_cast<double>(hist.touched.size());
}

std::vector<int> build_hiq_list(const EdgeHistogram& hist, const std::set<int>& pending) {
  // freq(q) is strictly above the mean iff freq(q) * |touched| > total, which
  // keeps the all-equal case exactly at the threshold.
  const long touched = static_cast<long>(hist.touched.size());
  std::vector<std::pair<long, int>> above;
  for (const auto& [q, f] : hist.qubit_freq) {
    if (f * touched > hist.total_pairs && pending.count(q)) {
      above.emplace_back(f, q);
    }
  }
  std::sort(above.begin(), above.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> hiq;
  hiq.reserve(above.size());
  for (const auto& [f, q] : above) hiq.push_back(q);
  return hiq;
}

std::optional<int> select_lead_physical(const CouplingGraph& graph,
                                        const Calibration& calibration,
                                        const std::set<int>& available) {
  std::optional<int> best;
  int best_count = 0;
  double best_edge = 0.0;
  double best_readout = 0.0;
  for (int q : available) {
    int count = 0;
    double err_sum = 0.0;
    for (int nbr : graph.adjacent(q)) {
      if (available.count(nbr)) {
        ++count;
        err_sum += calibration.edge_error(q, nbr);
      }
    }
    if (count == 0) continue;
    double mean_edge = err_sum / count;
    double readout = calibration.readout(q);
    bool better = false;
    if (!best) {
      better = true;
    } else if (count != best_count) {
      better = count > best_count;
    } else if (mean_edge != best_edge) {
      better = mean_edge < best_edge;
    } else if (readout != best_readout) {
      better = readout < best_readout;
    }
    // equal on every key: keep the earlier (lower) index
    if (better) {
      best = q;
      best_count = count;
      best_edge = mean_edge;
      best_readout = readout;
    }
  }
  return best;
}

std::vector<int> select_logical_qubits(const std::set<int>& pending,
                                       const std::vector<int>* hiq,
                                       const EdgeHistogram& local_hist, int k) {
  std::vector<int> out;
  int lead = -1;
  if (hiq) {
    for (int q : *hiq) {
      if (pending.count(q)) {
        lead = q;
        break;
      }
    }
  } else {
    long best_freq = 0;
    for (const auto& [q, f] : local_hist.qubit_freq) {
      if (pending.count(q) && f > best_freq) {
        best_freq = f;
        lead = q;
      }
    }
  }
  if (lead < 0) return out;
  out.push_back(lead);

  std::vector<std::pair<long, int>> partners;
  for (auto it = local_hist.pair_counts.lower_bound({lead, 0});
       it != local_hist.pair_counts.end() && it->first.control == lead; ++it) {
    int partner = it->first.target;
    if (partner != lead && it->second > 0 && pending.count(partner)) {
      partners.emplace_back(it->second, partner);
    }
  }
  std::sort(partners.begin(), partners.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (const auto& [count, partner] : partners) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(partner);
  }
  return out;
}

void map_qubits(const std::vector<int>& logical, int lead_physical,
                const CouplingGraph& graph, const Calibration& calibration,
                LayoutMap& layout, MapperState& state) {
  if (logical.size() < 2) {
    throw std::invalid_argument("map_qubits needs a lead and at least one partner");
  }
  if (!state.available.count(lead_physical)) {
    throw std::logic_error("lead physical qubit is not available");
  }
  std::vector<int> neighbors;
  for (int nbr : graph.adjacent(lead_physical)) {
    if (state.available.count(nbr)) neighbors.push_back(nbr);
  }
  if (neighbors.empty()) {
    throw std::logic_error("lead physical qubit has no available neighbor");
  }
  std::stable_sort(neighbors.begin(), neighbors.end(), [&](int a, int b) {
    double ea = calibration.edge_error(lead_physical, a);
    double eb = calibration.edge_error(lead_physical, b);
    if (ea != eb) return ea < eb;
    double ra = calibration.readout(a);
    double rb = calibration.readout(b);
    if (ra != rb) return ra < rb;
    return a < b;
  });

  StepRecord rec;
  rec.round = static_cast<int>(state.rounds.size());
  rec.lead_logical = logical[0];
  rec.lead_physical = lead_physical;

  layout.assign(logical[0], lead_physical);
  state.pending.erase(logical[0]);
  state.available.erase(lead_physical);
  rec.assignments.emplace_back(logical[0], lead_physical);

  std::size_t slot = 0;
  for (std::size_t i = 1; i < logical.size() && slot < neighbors.size(); ++i, ++slot) {
    layout.assign(logical[i], neighbors[slot]);
    state.pending.erase(logical[i]);
    state.available.erase(neighbors[slot]);
    rec.assignments.emplace_back(logical[i], neighbors[slot]);
  }
  state.steps.push_back(std::move(rec));
}

namespace {

int available_neighbor_count(const CouplingGraph& graph, const std::set<int>& available,
                             int q) {
  int count = 0;
  for (int nbr : graph.adjacent(q)) {
    if (available.count(nbr)) ++count;
  }
  return count;
}

bool any_pending_pair_symbol(const LinearizedTrace& trace,
                             const std::set<int>& pending) {
  for (std::int32_t sym : trace.symbols) {
    QubitPair p = decode_symbol(sym, trace.width);
    if (pending.count(p.control) && pending.count(p.target)) return true;
  }
  return false;
}

std::vector<QubitPair> occurrence_pairs(const LinearizedTrace& trace,
                                        const SubstringMatch& match) {
  std::vector<QubitPair> pairs;
  pairs.reserve(match.start_positions.size() * match.length);
  for (std::int64_t start : match.start_positions) {
    for (std::int64_t k = 0; k < match.length; ++k) {
      pairs.push_back(decode_symbol(trace.symbols[start + k], trace.width));
    }
  }
  return pairs;
}

}  // namespace

SsResult map_by_ss(const qasm::Circuit& circuit, const CouplingGraph& graph,
                   const Calibration& calibration) {
  SsResult result;
  result.layout.method = Method::Ss;
  MapperState& st = result.state;
  st = make_mapper_state(circuit, graph, LayoutMap{});

  bool done = false;
  std::optional<SubstringMatch> cached_match;
  int round_index = 0;
  while (!done) {
    // Nothing SS could still map: every further round would only churn.
    if (st.pending.empty()) break;
    if (!any_pending_pair_symbol(st.trace, st.pending)) break;

    if (!cached_match) cached_match = find_lrnos(st.trace);
    const SubstringMatch match = *cached_match;
    if (match.length < 2) done = true;

    // Qubit ranking is scoped to the substring occurrences; the final round
    // (no repeat left) falls back to the full remaining pair list.
    EdgeHistogram ehist = done ? build_histogram(st.edges)
                               : build_histogram(occurrence_pairs(st.trace, match));
    st.hiq = build_hiq_list(ehist, st.pending);

    RoundRecord round;
    round.index = round_index;
    round.trace_length = st.trace.size();
    round.lrnos_length = match.length;
    round.occurrence_starts = match.start_positions;
    round.hist_mean = hiq_mean(ehist);
    round.hiq = st.hiq;

    const std::size_t mapped_before = result.layout.size();
    for (;;) {
      auto lead_physical = select_lead_physical(graph, calibration, st.available);
      if (!lead_physical) break;
      int k = 1 + available_neighbor_count(graph, st.available, *lead_physical);
      std::vector<int> logical = select_logical_qubits(st.pending, &st.hiq, ehist, k);
      if (logical.size() < 2) break;
      map_qubits(logical, *lead_physical, graph, calibration, result.layout, st);
    }
    round.mapped_qubits = static_cast<int>(result.layout.size() - mapped_before);

    if (round.mapped_qubits == 0 && !done) {
      st.trace = remove_occurrences(st.trace, match);
      cached_match.reset();
      round.removed_occurrences = true;
      std::erase_if(st.edges, [&](const QubitPair& p) {
        return !st.pending.count(p.control) || !st.pending.count(p.target);
      });
    }
    st.rounds.push_back(std::move(round));
    ++round_index;
  }
  return result;
}

LayoutMap map_by_gf(const qasm::Circuit& circuit, const CouplingGraph& graph,
                    const Calibration& calibration, LayoutMap seed,
                    MapperState& state) {
  LayoutMap layout = std::move(seed);
  const std::vector<QubitPair> all_pairs = extract_pairs(circuit);
  while (!state.pending.empty()) {
    std::vector<QubitPair> restricted;
    for (const auto& p : all_pairs) {
      if (state.pending.count(p.control) && state.pending.count(p.target)) {
        restricted.push_back(p);
      }
    }
    EdgeHistogram hist = build_histogram(restricted);
    if (hist.pair_counts.empty()) break;
    auto lead_physical = select_lead_physical(graph, calibration, state.available);
    if (!lead_physical) break;
    int k = 1 + available_neighbor_count(graph, state.available, *lead_physical);
    std::vector<int> logical = select_logical_qubits(state.pending, nullptr, hist, k);
    if (logical.size() < 2) break;
    map_qubits(logical, *lead_physical, graph, calibration, layout, state);
  }
  return layout;
}

LayoutMap map_fallback_single_qubit(const qasm::Circuit& circuit,
                                    const CouplingGraph& graph,
                                    const Calibration& calibration, LayoutMap layout) {
  const std::map<int, long> usage = circuit.qubit_usage();
  std::vector<int> unmapped;
  for (int q : circuit.referenced_qubits()) {
    if (!layout.contains(q)) unmapped.push_back(q);
  }
  if (unmapped.empty()) return layout;

  std::stable_sort(unmapped.begin(), unmapped.end(), [&](int a, int b) {
    long ua = usage.count(a) ? usage.at(a) : 0;
    long ub = usage.count(b) ? usage.at(b) : 0;
    if (ua != ub) return ua > ub;
    return a < b;
  });

  std::vector<int> free_physical;
  for (int p = 0; p < graph.width; ++p) {
    if (!layout.physical_used(p)) free_physical.push_back(p);
  }
  if (unmapped.size() > free_physical.size()) {
    throw DeviceError("device too small: circuit references " +
                      std::to_string(layout.size() + unmapped.size()) +
                      " logical qubits but device '" + graph.name + "' has width " +
                      std::to_string(graph.width));
  }
  std::stable_sort(free_physical.begin(), free_physical.end(), [&](int a, int b) {
    double sa = calibration.single_qubit(a) + calibration.readout(a);
    double sb = calibration.single_qubit(b) + calibration.readout(b);
    if (sa != sb) return sa < sb;
    return a < b;
  });
  for (std::size_t i = 0; i < unmapped.size(); ++i) {
    layout.assign(unmapped[i], free_physical[i]);
  }
  layout.fallback_augmented = true;
  return layout;
}

LayoutMap map_circuit(const qasm::Circuit& circuit, const CouplingGraph& graph,
                      const Calibration& calibration, Method method,
                      MapperState* diagnostics) {
  LayoutMap layout;
  MapperState state;
  switch (method) {
    case Method::Ss: {
      SsResult ss = map_by_ss(circuit, graph, calibration);
      layout = std::move(ss.layout);
      state = std::move(ss.state);
      break;
    }
    case Method::Gf: {
      state = make_mapper_state(circuit, graph, LayoutMap{});
      layout = map_by_gf(circuit, graph, calibration, LayoutMap{}, state);
      break;
    }
    case Method::Gsf: {
      SsResult ss = map_by_ss(circuit, graph, calibration);
      state = std::move(ss.state);
      layout = map_by_gf(circuit, graph, calibration, std::move(ss.layout), state);
      break;
    }
  }
  layout = map_fallback_single_qubit(circuit, graph, calibration, std::move(layout));
  layout.method = method;
  if (diagnostics) *diagnostics = std::move(state);
  return layout;
}

LayoutMap identity_layout(const qasm::Circuit& circuit, int width) {
  LayoutMap layout;
  for (int q : circuit.referenced_qubits()) {
    if (q >= width) {
      throw LayoutError("identity layout needs device width > " + std::to_string(q));
    }
    layout.assign(q, q);
  }
  return layout;
}

}  // namespace qlayout
