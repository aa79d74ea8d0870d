#include <doctest.h>

#include <random>

#include "qlayout/mapper.hpp"
#include "qlayout/qasm.hpp"
#include "testutil.hpp"

using namespace qlayout;

namespace {

qasm::Circuit circuit_from_pairs(const std::vector<QubitPair>& pairs, int n_qubits) {
  return qasm::parse_qasm(testutil::qasm_from_pairs(pairs, n_qubits), "pairs");
}

std::map<int, int> plain(const LayoutMap& layout) { return layout.assignment(); }

}  // namespace

TEST_CASE("hiq list: strictly above the mean") {
  SUBCASE("frequencies {q0:10, q1:2} give mean 6 and HIQ [q0]") {
    std::vector<QubitPair> pairs;
    for (int i = 0; i < 10; ++i) pairs.push_back({0, 1});
    for (int i = 0; i < 2; ++i) pairs.push_back({1, 0});
    EdgeHistogram h = build_histogram(pairs);
    CHECK(hiq_mean(h) == doctest::Approx(6.0));
    CHECK(build_hiq_list(h, {0, 1}) == std::vector<int>{0});
  }
  SUBCASE("all qubits at the mean give an empty list") {
    EdgeHistogram h = build_histogram(std::vector<QubitPair>{{0, 1}, {1, 0}});
    CHECK(build_hiq_list(h, {0, 1}).empty());
  }
  SUBCASE("second-operand-only qubits lower the mean") {
    // graycode pairs: every first operand used once, q0 only as target;
    // mean 5/6 puts all five first operands above it.
    EdgeHistogram h = build_histogram(
        std::vector<QubitPair>{{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}});
    CHECK(hiq_mean(h) == doctest::Approx(5.0 / 6.0));
    CHECK(build_hiq_list(h, {0, 1, 2, 3, 4, 5}) == std::vector<int>{1, 2, 3, 4, 5});
  }
  SUBCASE("ordering is frequency descending, ties by lower index") {
    std::vector<QubitPair> pairs;
    for (int i = 0; i < 4; ++i) pairs.push_back({7, 1});
    for (int i = 0; i < 4; ++i) pairs.push_back({3, 1});
    for (int i = 0; i < 6; ++i) pairs.push_back({5, 1});
    pairs.push_back({1, 7});  // q1 below mean
    EdgeHistogram h = build_histogram(pairs);
    CHECK(build_hiq_list(h, {1, 3, 5, 7}) == std::vector<int>{5, 3, 7});
  }
  SUBCASE("membership requires pending") {
    std::vector<QubitPair> pairs;
    for (int i = 0; i < 10; ++i) pairs.push_back({0, 1});
    for (int i = 0; i < 2; ++i) pairs.push_back({1, 0});
    EdgeHistogram h = build_histogram(pairs);
    CHECK(build_hiq_list(h, {1}).empty());
  }
}

TEST_CASE("select_lead_physical picks the best-connected available qubit") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  SUBCASE("all available on kolkata: a degree-3 qubit") {
    std::set<int> avail;
    for (int q = 0; q < kolkata.width; ++q) avail.insert(q);
    auto lead = select_lead_physical(kolkata, zeros, avail);
    REQUIRE(lead.has_value());
    CHECK(kolkata.degree(*lead) == 3);
    CHECK(*lead == 1);  // lowest index among the degree-3 qubits
  }
  SUBCASE("line graph: the middle qubit") {
    CouplingGraph line = testutil::line_graph(3);
    auto lead = select_lead_physical(line, Calibration::zeros(3), {0, 1, 2});
    CHECK(lead == 1);
  }
  SUBCASE("a single available qubit has no available neighbor") {
    CouplingGraph line = testutil::line_graph(3);
    CHECK_FALSE(select_lead_physical(line, Calibration::zeros(3), {2}).has_value());
    CHECK_FALSE(select_lead_physical(line, Calibration::zeros(3), {}).has_value());
  }
  SUBCASE("edge-error tie-break") {
    CouplingGraph line = testutil::line_graph(5);
    Calibration cal = Calibration::zeros(5);
    cal.two_qubit_gate_error[{0, 1}] = 0.2;
    cal.two_qubit_gate_error[{1, 2}] = 0.2;
    cal.two_qubit_gate_error[{2, 3}] = 0.0;
    auto lead = select_lead_physical(line, cal, {0, 1, 2, 3, 4});
    CHECK(lead == 3);  // mean edge error 0 beats 0.2 (q1) and 0.1 (q2)
  }
  SUBCASE("readout tie-break after edge errors") {
    CouplingGraph line = testutil::line_graph(5);
    Calibration cal = Calibration::zeros(5);
    cal.readout_error[1] = 0.05;
    cal.readout_error[2] = 0.01;
    cal.readout_error[3] = 0.05;
    auto lead = select_lead_physical(line, cal, {0, 1, 2, 3, 4});
    CHECK(lead == 2);
  }
  SUBCASE("calibration can promote q25 on kolkata") {
    Calibration cal = Calibration::zeros(kolkata.width);
    for (const auto& e : kolkata.edges) cal.two_qubit_gate_error[e] = 0.05;
    cal.two_qubit_gate_error[{22, 25}] = 0.01;
    cal.two_qubit_gate_error[{24, 25}] = 0.01;
    cal.two_qubit_gate_error[{25, 26}] = 0.01;
    std::set<int> avail;
    for (int q = 0; q < kolkata.width; ++q) avail.insert(q);
    CHECK(select_lead_physical(kolkata, cal, avail) == 25);
  }
}

TEST_CASE("select_logical_qubits") {
  EdgeHistogram h = build_histogram(std::vector<QubitPair>{
      {8, 9}, {8, 9}, {8, 9}, {8, 1}, {8, 1}, {8, 7}, {9, 8}, {9, 8}});
  std::set<int> pending{1, 7, 8, 9};
  std::vector<int> hiq{8, 9};
  SUBCASE("lead plus partners ranked by pair count") {
    CHECK(select_logical_qubits(pending, &hiq, h, 4) == std::vector<int>{8, 9, 1, 7});
  }
  SUBCASE("k caps the partner count") {
    CHECK(select_logical_qubits(pending, &hiq, h, 2) == std::vector<int>{8, 9});
  }
  SUBCASE("empty hiq gives an empty list") {
    std::vector<int> none;
    CHECK(select_logical_qubits(pending, &none, h, 4).empty());
  }
  SUBCASE("lead without pending partner signals the break") {
    std::set<int> only_lead{8};
    CHECK(select_logical_qubits(only_lead, &hiq, h, 4) == std::vector<int>{8});
  }
  SUBCASE("global-frequency mode ignores hiq and uses the histogram lead") {
    CHECK(select_logical_qubits(pending, nullptr, h, 4) ==
          std::vector<int>{8, 9, 1, 7});
    std::set<int> without_8{1, 7, 9};
    CHECK(select_logical_qubits(without_8, nullptr, h, 4) == std::vector<int>{9});
  }
}

TEST_CASE("map_qubits assigns the lead and its ranked neighbors") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  qasm::Circuit c = circuit_from_pairs({{8, 9}}, 10);

  SUBCASE("zero calibration orders neighbors by index") {
    MapperState st = make_mapper_state(c, kolkata, LayoutMap{});
    st.pending = {1, 7, 8, 9};
    LayoutMap layout;
    map_qubits({8, 9, 1, 7}, 25, kolkata, zeros, layout, st);
    CHECK(plain(layout) ==
          std::map<int, int>{{8, 25}, {9, 22}, {1, 24}, {7, 26}});
    CHECK(st.pending.empty());
    CHECK_FALSE(st.available.count(25));
    CHECK_FALSE(st.available.count(22));
    REQUIRE(st.steps.size() == 1);
    CHECK(st.steps[0].lead_logical == 8);
    CHECK(st.steps[0].lead_physical == 25);
  }
  SUBCASE("edge errors reorder the neighbor slots") {
    Calibration cal = Calibration::zeros(kolkata.width);
    cal.two_qubit_gate_error[{25, 26}] = 0.01;
    cal.two_qubit_gate_error[{22, 25}] = 0.05;
    cal.two_qubit_gate_error[{24, 25}] = 0.10;
    MapperState st = make_mapper_state(c, kolkata, LayoutMap{});
    st.pending = {1, 7, 8, 9};
    LayoutMap layout;
    map_qubits({8, 9, 1, 7}, 25, kolkata, cal, layout, st);
    CHECK(plain(layout) ==
          std::map<int, int>{{8, 25}, {9, 26}, {1, 22}, {7, 24}});
  }
  SUBCASE("two qubits onto a lead with one free neighbor") {
    CouplingGraph line = testutil::line_graph(2);
    qasm::Circuit c2 = circuit_from_pairs({{0, 1}}, 2);
    MapperState st = make_mapper_state(c2, line, LayoutMap{});
    LayoutMap layout;
    map_qubits({0, 1}, 0, line, Calibration::zeros(2), layout, st);
    CHECK(plain(layout) == std::map<int, int>{{0, 0}, {1, 1}});
  }
  SUBCASE("excess logical qubits stay pending") {
    MapperState st = make_mapper_state(c, kolkata, LayoutMap{});
    st.pending = {0, 1, 2, 3, 4};
    LayoutMap layout;
    map_qubits({0, 1, 2, 3, 4}, 25, kolkata, zeros, layout, st);
    CHECK(layout.size() == 4);  // lead + 3 neighbors of q25
    CHECK(st.pending == std::set<int>{4});
  }
}

TEST_CASE("map_by_ss on the graycode chain over a 6-qubit line") {
  // The chain has no repeated pair, so the single round ranks qubits by the
  // full histogram: lead q1 maps to the best-connected line qubit and pulls
  // q0 next to it; q2's only pair partner is then taken, ending the round.
  CouplingGraph line = testutil::line_graph(6);
  qasm::Circuit c =
      circuit_from_pairs({{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}}, 6);
  SsResult ss = map_by_ss(c, line, Calibration::zeros(6));
  CHECK(plain(ss.layout) == std::map<int, int>{{1, 1}, {0, 0}});
  CHECK(ss.state.pending == std::set<int>{2, 3, 4, 5});
  CHECK(ss.state.rounds.size() == 1);  // terminates after the first round
  CHECK(ss.state.rounds[0].lrnos_length == 0);
  CHECK(ss.state.rounds[0].hiq == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(testutil::steps_coupling_adjacent(ss.state, line));
  // every pair mapped together is physically adjacent
  for (const auto& step : ss.state.steps) {
    for (std::size_t i = 1; i < step.assignments.size(); ++i) {
      CHECK(line.has_edge(step.lead_physical, step.assignments[i].second));
    }
  }
}

TEST_CASE("map_by_ss with zero two-qubit gates returns an empty layout") {
  CouplingGraph line = testutil::line_graph(4);
  qasm::Circuit c = qasm::parse_qasm("OPENQASM 2.0; qreg q[3]; x q[0]; x q[1];");
  SsResult ss = map_by_ss(c, line, Calibration::zeros(4));
  CHECK(ss.layout.empty());
  CHECK(ss.state.rounds.empty());
}

TEST_CASE("map_by_ss terminates after one round on repeat-free traces") {
  std::mt19937 rng(67);
  CouplingGraph kolkata = testutil::load_kolkata();
  // All pairs distinct: no repeated symbol, lrnos length 0.
  std::vector<QubitPair> pairs;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      if (a != b) pairs.push_back({a, b});
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(20);
  std::set<QubitPair> unique(pairs.begin(), pairs.end());
  REQUIRE(unique.size() == pairs.size());

  qasm::Circuit c = circuit_from_pairs(pairs, 8);
  SsResult ss = map_by_ss(c, kolkata, Calibration::zeros(kolkata.width));
  CHECK(ss.state.rounds.size() == 1);
  CHECK(ss.state.rounds[0].lrnos_length <= 1);
  CHECK(testutil::steps_coupling_adjacent(ss.state, kolkata));
  for (const auto& [l, p] : ss.layout.assignment()) {
    CHECK(p < kolkata.width);
  }
}

TEST_CASE("map_by_ss maps a full block in one step when the lead dominates") {
  // Block with q0 paired to everyone, repeated twice: lrnos is the block,
  // hiq = [q0, q1], and one step maps all four qubits around the lead.
  std::vector<QubitPair> block{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 0}};
  std::vector<QubitPair> pairs = block;
  pairs.insert(pairs.end(), block.begin(), block.end());
  CouplingGraph kolkata = testutil::load_kolkata();
  qasm::Circuit c = circuit_from_pairs(pairs, 4);
  SsResult ss = map_by_ss(c, kolkata, Calibration::zeros(kolkata.width));
  CHECK(ss.state.rounds[0].lrnos_length == 7);
  CHECK(ss.state.rounds[0].occurrence_starts == std::vector<std::int64_t>{0, 7});
  CHECK(plain(ss.layout) == std::map<int, int>{{0, 1}, {1, 0}, {2, 2}, {3, 4}});
  CHECK(ss.state.pending.empty());

  SUBCASE("gsf equals ss when nothing is left for the frequency phase") {
    LayoutMap gsf = map_circuit(c, kolkata, Calibration::zeros(kolkata.width),
                                Method::Gsf);
    LayoutMap ssm = map_circuit(c, kolkata, Calibration::zeros(kolkata.width),
                                Method::Ss);
    CHECK(plain(gsf) == plain(ssm));
  }
}

TEST_CASE("map_by_gf on a star circuit") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  std::vector<QubitPair> pairs;
  for (int i = 0; i < 5; ++i) pairs.push_back({0, 1});
  for (int i = 0; i < 3; ++i) pairs.push_back({0, 2});
  pairs.push_back({0, 3});
  qasm::Circuit c = circuit_from_pairs(pairs, 4);

  MapperState st = make_mapper_state(c, kolkata, LayoutMap{});
  LayoutMap layout = map_by_gf(c, kolkata, zeros, LayoutMap{}, st);
  // q0 leads onto the lowest-index degree-3 qubit; partners take its
  // neighbors in pair-frequency order.
  CHECK(plain(layout) == std::map<int, int>{{0, 1}, {1, 0}, {2, 2}, {3, 4}});
  CHECK(kolkata.degree(layout.at(0)) == 3);
  for (int partner : {1, 2, 3}) {
    CHECK(kolkata.has_edge(layout.at(0), layout.at(partner)));
  }
}

TEST_CASE("map_by_gf returns the seed when everything is already mapped") {
  CouplingGraph line = testutil::line_graph(4);
  qasm::Circuit c = circuit_from_pairs({{0, 1}}, 2);
  LayoutMap seed;
  seed.assign(0, 2);
  seed.assign(1, 3);
  MapperState st = make_mapper_state(c, line, seed);
  CHECK(st.pending.empty());
  LayoutMap out = map_by_gf(c, line, Calibration::zeros(4), seed, st);
  CHECK(plain(out) == plain(seed));
}

TEST_CASE("map_by_gf breaks when no pending pair remains") {
  CouplingGraph line = testutil::line_graph(6);
  qasm::Circuit c = circuit_from_pairs({{0, 1}, {5, 0}}, 6);
  LayoutMap seed;
  seed.assign(0, 0);
  seed.assign(1, 1);
  MapperState st = make_mapper_state(c, line, seed);
  CHECK(st.pending == std::set<int>{5});
  LayoutMap out = map_by_gf(c, line, Calibration::zeros(6), seed, st);
  CHECK(plain(out) == plain(seed));  // q5 is left for the fallback
  CHECK(st.pending == std::set<int>{5});
}

TEST_CASE("single-qubit fallback") {
  SUBCASE("lowest error score wins") {
    CouplingGraph line = testutil::line_graph(8);
    Calibration cal = Calibration::zeros(8);
    for (int q = 0; q < 8; ++q) cal.single_qubit_gate_error[q] = 0.5;
    cal.single_qubit_gate_error[3] = 0.015;
    cal.readout_error[3] = 0.005;  // score 0.02
    cal.single_qubit_gate_error[7] = 0.005;
    cal.readout_error[7] = 0.005;  // score 0.01
    qasm::Circuit c = qasm::parse_qasm(
        "OPENQASM 2.0; qreg q[3]; cx q[0],q[1]; x q[2];");
    LayoutMap seed;
    seed.assign(0, 0);
    seed.assign(1, 1);
    LayoutMap out = map_fallback_single_qubit(c, line, cal, seed);
    CHECK(out.at(2) == 7);
    CHECK(out.fallback_augmented);
  }
  SUBCASE("no unmapped qubits is a no-op") {
    CouplingGraph line = testutil::line_graph(4);
    qasm::Circuit c = circuit_from_pairs({{0, 1}}, 2);
    LayoutMap seed;
    seed.assign(0, 0);
    seed.assign(1, 1);
    LayoutMap out = map_fallback_single_qubit(c, line, Calibration::zeros(4), seed);
    CHECK(plain(out) == plain(seed));
    CHECK_FALSE(out.fallback_augmented);
  }
  SUBCASE("heavier qubits take the better physical slots") {
    CouplingGraph line = testutil::line_graph(4);
    Calibration cal = Calibration::zeros(4);
    cal.readout_error = {0.4, 0.1, 0.2, 0.3};
    qasm::Circuit c = qasm::parse_qasm(
        "OPENQASM 2.0; qreg q[3]; x q[0]; x q[1]; x q[1]; x q[2]; x q[2]; x q[2];");
    LayoutMap out =
        map_fallback_single_qubit(c, line, cal, LayoutMap{});
    CHECK(plain(out) == std::map<int, int>{{2, 1}, {1, 2}, {0, 3}});
  }
  SUBCASE("device too small") {
    CouplingGraph kolkata = testutil::load_kolkata();
    std::string src = "OPENQASM 2.0; qreg q[28];\n";
    for (int q = 0; q < 28; ++q) src += "x q[" + std::to_string(q) + "];\n";
    qasm::Circuit c = qasm::parse_qasm(src);
    CHECK_THROWS_AS(map_fallback_single_qubit(c, kolkata,
                                              Calibration::zeros(kolkata.width),
                                              LayoutMap{}),
                    DeviceError);
    CHECK_THROWS_AS(
        map_circuit(c, kolkata, Calibration::zeros(kolkata.width), Method::Gsf),
        DeviceError);
  }
}

TEST_CASE("gf and gsf agree on circuits with no repeated pair") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  qasm::Circuit c =
      circuit_from_pairs({{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}}, 6);
  LayoutMap gf = map_circuit(c, kolkata, zeros, Method::Gf);
  LayoutMap gsf = map_circuit(c, kolkata, zeros, Method::Gsf);
  CHECK(plain(gf) == plain(gsf));
}

TEST_CASE("every method yields a total injective layout on graycode") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  qasm::Circuit c =
      circuit_from_pairs({{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}}, 16);
  for (Method m : {Method::Ss, Method::Gf, Method::Gsf}) {
    LayoutMap layout = map_circuit(c, kolkata, zeros, m);
    CHECK(testutil::layout_valid(layout, c, kolkata));
    CHECK(layout.size() == 6);
    // determinism: byte-identical serialization across runs
    LayoutMap again = map_circuit(c, kolkata, zeros, m);
    CHECK(layout_json(layout, "kolkata", method_name(m)) ==
          layout_json(again, "kolkata", method_name(m)));
  }
}

TEST_CASE("mapper state conservation and progress") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  std::mt19937 rng(91);
  for (int iter = 0; iter < 8; ++iter) {
    std::string src = (iter % 2 == 0)
                          ? testutil::random_circuit(300, 10, 0.5, 1000 + iter)
                          : testutil::block_circuit(2, 12, 8, 10, 2000 + iter);
    qasm::Circuit c = qasm::parse_qasm(src, "conservation");
    std::set<int> pair_qubits;
    for (const auto& p : extract_pairs(c)) {
      pair_qubits.insert(p.control);
      pair_qubits.insert(p.target);
    }
    SsResult ss = map_by_ss(c, kolkata, zeros);
    CHECK(ss.state.pending.size() + ss.layout.size() == pair_qubits.size());
    CHECK(ss.state.available.size() + ss.layout.size() ==
          static_cast<std::size_t>(kolkata.width));
    // each round either maps a qubit or strictly shortens the trace
    for (std::size_t r = 0; r < ss.state.rounds.size(); ++r) {
      const auto& round = ss.state.rounds[r];
      if (round.mapped_qubits == 0 && round.lrnos_length >= 2) {
        CHECK(round.removed_occurrences);
      }
      if (r > 0) {
        CHECK(ss.state.rounds[r].trace_length <=
              ss.state.rounds[r - 1].trace_length);
      }
    }
    CHECK(testutil::steps_coupling_adjacent(ss.state, kolkata));
    (void)rng;
  }
}

TEST_CASE("step adjacency holds for every method on random circuits") {
  CouplingGraph kolkata = testutil::load_kolkata();
  Calibration zeros = Calibration::zeros(kolkata.width);
  for (int iter = 0; iter < 5; ++iter) {
    qasm::Circuit c = qasm::parse_qasm(
        testutil::block_circuit(2, 10, 6, 12, 500 + iter), "steps");
    for (Method m : {Method::Ss, Method::Gf, Method::Gsf}) {
      MapperState diag;
      LayoutMap layout = map_circuit(c, kolkata, zeros, m, &diag);
      CHECK(testutil::layout_valid(layout, c, kolkata));
      CHECK(testutil::steps_coupling_adjacent(diag, kolkata));
    }
  }
}

TEST_CASE("identity layout covers exactly the referenced qubits") {
  qasm::Circuit c = qasm::parse_qasm(
      "OPENQASM 2.0; qreg q[8]; cx q[2],q[5]; x q[7];");
  LayoutMap id = identity_layout(c, 27);
  CHECK(plain(id) == std::map<int, int>{{2, 2}, {5, 5}, {7, 7}});
  CHECK_THROWS_AS(identity_layout(c, 6), LayoutError);
}
