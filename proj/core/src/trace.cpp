#include "qlayout/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qlayout {

long EdgeHistogram::freq(int q) const {
  auto it = qubit_freq.find(q);
  return it == qubit_freq.end() ? 0 : it->second;
}

int EdgeHistogram::distinct_neighbors(int q) const {
  int n = 0;
  for (auto it = pair_counts.lower_bound({q, 0});
       it != pair_counts.end() && it->first.control == q; ++it) {
    ++n;
  }
  return n;
}

long EdgeHistogram::top_k_mass(int q, int k) const {
  std::vector<long> counts;
  for (auto it = pair_counts.lower_bound({q, 0});
       it != pair_counts.end() && it->first.control == q; ++it) {
    counts.push_back(it->second);
  }
  std::sort(counts.begin(), counts.end(), std::greater<>());
  long mass = 0;
  for (int i = 0; i < k && i < static_cast<int>(counts.size()); ++i) {
    mass += counts[i];
  }
  return mass;
}

std::vector<QubitPair> extract_pairs(const qasm::Circuit& circuit) {
  std::vector<QubitPair> pairs;
  for (const auto& g : circuit.gates) {
    if (!circuit.pair_eligible(g)) continue;
    pairs.push_back({circuit.flat_qubit(g.qubits[0]), circuit.flat_qubit(g.qubits[1])});
  }
  return pairs;
}

std::vector<std::int32_t> pair_gate_indices(const qasm::Circuit& circuit) {
  std::vector<std::int32_t> indices;
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    if (circuit.pair_eligible(circuit.gates[i])) {
      indices.push_back(static_cast<std::int32_t>(i));
    }
  }
  return indices;
}

LinearizedTrace linearize(std::span<const QubitPair> pairs, int width,
                          std::span<const std::int32_t> gate_indices) {
  if (!gate_indices.empty() && gate_indices.size() != pairs.size()) {
    throw std::invalid_argument("gate_indices length must match pairs length");
  }
  LinearizedTrace trace;
  trace.width = width;
  trace.symbols.reserve(pairs.size());
  trace.pair_positions.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.control < 0 || p.control >= width || p.target < 0 || p.target >= width) {
      throw std::out_of_range("qubit pair (" + std::to_string(p.control) + "," +
                              std::to_string(p.target) + ") exceeds device width " +
                              std::to_string(width));
    }
    trace.symbols.push_back(static_cast<std::int32_t>(p.control) * width + p.target);
    trace.pair_positions.push_back(gate_indices.empty()
                                       ? static_cast<std::int32_t>(i)
                                       : gate_indices[i]);
  }
  return trace;
}

QubitPair decode_symbol(std::int32_t symbol, int width) {
  if (width <= 0 || symbol < 0 ||
      symbol >= static_cast<std::int64_t>(width) * width) {
    throw std::out_of_range("symbol " + std::to_string(symbol) +
                            " not in alphabet of width " + std::to_string(width));
  }
  return {symbol / width, symbol % width};
}

EdgeHistogram build_histogram(std::span<const QubitPair> pairs) {
  EdgeHistogram hist;
  for (const auto& p : pairs) {
    ++hist.pair_counts[p];
    ++hist.qubit_freq[p.control];
    hist.touched.insert(p.control);
    hist.touched.insert(p.target);
    ++hist.total_pairs;
  }
  hist.distinct_pairs = static_cast<int>(hist.pair_counts.size());
  return hist;
}

double pair_count_mean(const EdgeHistogram& hist) {
  if (hist.distinct_pairs == 0) return 0.0;
  return static_cast<double>(hist.total_pairs) / hist.distinct_pairs;
}

double pair_count_stddev(const EdgeHistogram& hist) {
  if (hist.distinct_pairs == 0) return 0.0;
  const double mean = pair_count_mean(hist);
  double sum_sq = 0.0;
  for (const auto& [pair, count] : hist.pair_counts) {
    const double d = static_cast<double>(count) - mean;
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / hist.distinct_pairs);
}

SubstringMatch find_lrnos(const LinearizedTrace& trace, LrnosStats* stats) {
  const auto& s = trace.symbols;
  const std::int64_t n = trace.size();
  SubstringMatch match;
  if (stats) *stats = {};

  // Prefix-length table T[i][j] over 1-based end positions, kept as two rows:
  // T[i][j] = T[i-1][j-1] + 1 when s[i] == s[j] and the previous run has not
  // yet reached the occurrence distance j - i (the non-overlap guard),
  // otherwise 0. Row i only reads row i-1.
  std::vector<std::int32_t> prev(n + 1, 0), curr(n + 1, 0);
  if (stats) {
    stats->workspace_bytes = 2 * (n + 1) * sizeof(std::int32_t);
    stats->rows_kept = 2;
  }

  std::int64_t best_len = 0;
  std::int64_t best_end = 0;  // 1-based end of the first occurrence
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int32_t si = s[i - 1];
    for (std::int64_t j = i + 1; j <= n; ++j) {
      if (si == s[j - 1] && prev[j - 1] < j - i) {
        curr[j] = prev[j - 1] + 1;
        if (curr[j] > best_len) {
          best_len = curr[j];
          best_end = i;
        }
      } else {
        curr[j] = 0;
      }
    }
    if (stats) stats->cells += static_cast<std::uint64_t>(n - i);
    std::swap(prev, curr);
  }

  if (best_len == 0) return match;
  match.length = best_len;

  // All non-overlapping occurrences of the winner, by one greedy scan. The
  // DP's first occurrence is the earliest one, so the scan rediscovers it.
  const std::int64_t pattern_start = best_end - best_len;
  std::int64_t pos = 0;
  while (pos + best_len <= n) {
    if (std::equal(s.begin() + pos, s.begin() + pos + best_len,
                   s.begin() + pattern_start)) {
      match.start_positions.push_back(pos);
      pos += best_len;
    } else {
      ++pos;
    }
  }
  return match;
}

LinearizedTrace remove_occurrences(const LinearizedTrace& trace,
                                   const SubstringMatch& match) {
  const std::int64_t n = trace.size();
  if (match.length < 0) throw std::invalid_argument("negative match length");
  if (match.length == 0 || match.start_positions.empty()) return trace;

  std::int64_t previous_end = -1;
  for (std::int64_t start : match.start_positions) {
    if (start < 0 || start + match.length > n) {
      throw std::invalid_argument("match occurrence at " + std::to_string(start) +
                                  " exceeds trace length " + std::to_string(n));
    }
    if (start < previous_end) {
      throw std::invalid_argument("match occurrences overlap at " +
                                  std::to_string(start));
    }
    previous_end = start + match.length;
  }
  const std::int64_t first = match.start_positions.front();
  for (std::int64_t start : match.start_positions) {
    if (!std::equal(trace.symbols.begin() + start,
                    trace.symbols.begin() + start + match.length,
                    trace.symbols.begin() + first)) {
      throw std::invalid_argument("occurrence at " + std::to_string(start) +
                                  " does not match the substring");
    }
  }

  LinearizedTrace out;
  out.width = trace.width;
  out.symbols.reserve(trace.symbols.size());
  out.pair_positions.reserve(trace.pair_positions.size());
  std::size_t occ = 0;
  for (std::int64_t i = 0; i < n;) {
    if (occ < match.start_positions.size() && i == match.start_positions[occ]) {
      i += match.length;
      ++occ;
      continue;
    }
    out.symbols.push_back(trace.symbols[i]);
    out.pair_positions.push_back(trace.pair_positions[i]);
    ++i;
  }
  return out;
}

}  // namespace qlayout
