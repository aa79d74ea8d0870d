#include <benchmark/benchmark.h>

#include <random>

#include "qlayout/mapper.hpp"
#include "qlayout/qasm.hpp"
#include "qlayout/router.hpp"
#include "qlayout/trace.hpp"
#include "testutil.hpp"

using namespace qlayout;

namespace {

LinearizedTrace random_trace(std::int64_t n, int alphabet, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::int32_t> sym(0, alphabet - 1);
  LinearizedTrace t;
  t.width = 32;
  t.symbols.resize(n);
  t.pair_positions.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    t.symbols[i] = sym(rng);
    t.pair_positions[i] = static_cast<std::int32_t>(i);
  }
  return t;
}

qasm::Circuit block_circuit(int block_len, int repeats, unsigned seed) {
  return qasm::parse_qasm(testutil::block_circuit(2, block_len, repeats, 16, seed),
                          "bench");
}

void BM_find_lrnos_random(benchmark::State& state) {
  LinearizedTrace t = random_trace(state.range(0), 76, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_lrnos(t));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_find_lrnos_random)->Arg(1000)->Arg(4000)->Arg(12000)->Complexity();

void BM_find_lrnos_structured(benchmark::State& state) {
  qasm::Circuit c = block_circuit(static_cast<int>(state.range(0)) / 20, 20, 2);
  LinearizedTrace t = linearize(extract_pairs(c), 27);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_lrnos(t));
  }
}
BENCHMARK(BM_find_lrnos_structured)->Arg(1000)->Arg(4000)->Arg(12000);

void BM_linearize_and_histogram(benchmark::State& state) {
  qasm::Circuit c = block_circuit(600, 20, 3);
  std::vector<QubitPair> pairs = extract_pairs(c);
  for (auto _ : state) {
    LinearizedTrace t = linearize(pairs, 27);
    EdgeHistogram h = build_histogram(pairs);
    benchmark::DoNotOptimize(t);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_linearize_and_histogram);

void BM_map_gsf(benchmark::State& state) {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  qasm::Circuit c = block_circuit(static_cast<int>(state.range(0)) / 10, 10, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_circuit(c, kolkata, zeros, Method::Gsf));
  }
}
BENCHMARK(BM_map_gsf)->Arg(500)->Arg(2000)->Arg(8000);

void BM_route(benchmark::State& state) {
  CouplingGraph kolkata = testutil::load_kolkata();
  qasm::Circuit c = qasm::parse_qasm(
      testutil::random_circuit(static_cast<int>(state.range(0)), 16, 0.5, 5), "bench");
  LayoutMap layout = identity_layout(c, kolkata.width);
  for (auto _ : state) {
    benchmark::DoNotOptimize(route(c, layout, kolkata));
  }
}
BENCHMARK(BM_route)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
