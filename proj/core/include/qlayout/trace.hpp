#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "qlayout/qasm.hpp"

namespace qlayout {

/// Ordered operand pair of a two-qubit gate: (first operand, second operand).
struct QubitPair {
  int control = 0;
  int target = 0;
  bool operator==(const QubitPair&) const = default;
  auto operator<=>(const QubitPair&) const = default;
};

/// The circuit's two-qubit gates as a string of integer symbols
/// control * width + target, one per gate, in gate order.
struct LinearizedTrace {
  std::vector<std::int32_t> symbols;
  int width = 0;
  std::vector<std::int32_t> pair_positions;  // originating gate index per symbol

  std::int64_t size() const { return static_cast<std::int64_t>(symbols.size()); }
};

struct EdgeHistogram {
  std::map<QubitPair, long> pair_counts;     // refs per ordered pair
  std::map<int, long> qubit_freq;            // first-operand count, entries > 0 only
  std::set<int> touched;                     // qubits appearing in any pair
  long total_pairs = 0;
  int distinct_pairs = 0;

  long freq(int q) const;                    // 0 when absent
  int distinct_neighbors(int q) const;       // partners with q as first operand
  long top_k_mass(int q, int k) const;       // mass of q's k heaviest partners
};

/// Non-overlapping occurrences of one repeated substring.
struct SubstringMatch {
  std::vector<std::int64_t> start_positions;  // ascending, gaps >= length
  std::int64_t length = 0;
};

struct LrnosStats {
  std::size_t workspace_bytes = 0;  // auxiliary DP allocation
  std::uint64_t cells = 0;          // DP cells evaluated
  int rows_kept = 0;
};

/// One pair per eligible two-qubit gate, in gate order, operand order kept.
/// Measure/barrier/reset and if-guarded gates contribute nothing; gates with
/// 3+ qubit operands contribute nothing (no pair alphabet for them).
std::vector<QubitPair> extract_pairs(const qasm::Circuit& circuit);

/// Gate indices aligned with extract_pairs output.
std::vector<std::int32_t> pair_gate_indices(const qasm::Circuit& circuit);

/// Symbols s = control * width + target; distinct pairs map to distinct
/// symbols, and (i,j) != (j,i). Throws std::out_of_range on index >= width.
LinearizedTrace linearize(std::span<const QubitPair> pairs, int width,
                          std::span<const std::int32_t> gate_indices = {});

QubitPair decode_symbol(std::int32_t symbol, int width);

EdgeHistogram build_histogram(std::span<const QubitPair> pairs);

/// Mean and population standard deviation of the per-pair usage counts.
double pair_count_mean(const EdgeHistogram& hist);
double pair_count_stddev(const EdgeHistogram& hist);

/// Longest repeating non-overlapping substring, via the two-row prefix-length
/// DP: O(n^2) time, O(n) auxiliary space. Returns length 0 when nothing
/// repeats. All non-overlapping occurrences of the winning substring are
/// reported, found by one greedy left-to-right scan. Deterministic: the
/// winner is the maximal-length match whose first occurrence starts earliest.
SubstringMatch find_lrnos(const LinearizedTrace& trace, LrnosStats* stats = nullptr);

/// Deletes the symbols covered by the match occurrences; survivors keep
/// their relative order and gate positions. Throws std::invalid_argument on
/// positions that are out of range, overlapping, or mismatching the pattern.
LinearizedTrace remove_occurrences(const LinearizedTrace& trace,
                                   const SubstringMatch& match);

}  // namespace qlayout
