#include "qlayout/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qlayout/device.hpp"
#include "qlayout/mapper.hpp"
#include "qlayout/qasm.hpp"
#include "qlayout/router.hpp"
#include "qlayout/trace.hpp"

namespace qlayout {

namespace fs = std::filesystem;

std::string size_group(long gate_volume) {
  if (gate_volume <= 1000) return "G1";
  if (gate_volume <= 5000) return "G2";
  if (gate_volume <= 10000) return "G3";
  if (gate_volume <= 20000) return "G4";
  if (gate_volume <= 30000) return "G5";
  if (gate_volume <= 40000) return "G6";
  if (gate_volume <= 100000) return "G7";
  if (gate_volume <= 250000) return "G8";
  return "G9";
}

namespace {

struct FileResult {
  std::string input;
  bool ok = false;
  std::string error;
  long original_volume = 0;
  bool has_metrics = false;
  double depth_ratio = 0.0;
  double volume_ratio = 0.0;
  long swap_delta = 0;
  double mapping_ms = 0.0;
  std::string log;  // verbose text and per-file tables, printed in input order
};

struct Paths {
  std::string remapped;
  std::string layout;
  std::string metrics;  // empty when metrics are off
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string describe_rounds(const MapperState& state) {
  std::ostringstream os;
  for (const auto& r : state.rounds) {
    os << "round " << r.index << ": trace " << r.trace_length << ", lrnos "
       << r.lrnos_length;
    if (!r.occurrence_starts.empty()) {
      os << " @ [";
      for (std::size_t i = 0; i < r.occurrence_starts.size(); ++i) {
        if (i) os << ",";
        os << r.occurrence_starts[i];
      }
      os << "]";
    }
    os << ", mean " << std::fixed << std::setprecision(2) << r.hist_mean << ", hiq {";
    for (std::size_t i = 0; i < r.hiq.size(); ++i) {
      if (i) os << ",";
      os << "q" << r.hiq[i];
    }
    os << "}, mapped " << r.mapped_qubits;
    if (r.removed_occurrences) os << ", removed occurrences";
    os << "\n";
    for (const auto& s : state.steps) {
      if (s.round != r.index) continue;
      os << "  step: lead q" << s.lead_logical << " -> phys " << s.lead_physical;
      for (std::size_t i = 1; i < s.assignments.size(); ++i) {
        os << "  q" << s.assignments[i].first << "->" << s.assignments[i].second;
      }
      os << "\n";
    }
  }
  if (state.rounds.empty()) {
    for (const auto& s : state.steps) {
      os << "step: lead q" << s.lead_logical << " -> phys " << s.lead_physical;
      for (std::size_t i = 1; i < s.assignments.size(); ++i) {
        os << "  q" << s.assignments[i].first << "->" << s.assignments[i].second;
      }
      os << "\n";
    }
  }
  return os.str();
}

FileResult process_file(const std::string& input, const Paths& paths,
                        const CouplingGraph& graph, const Calibration& calibration,
                        const RunConfig& config, Method method, bool batch) {
  FileResult result;
  result.input = input;
  std::ostringstream log;
  try {
    qasm::Circuit circuit = qasm::parse_qasm_file(input);
    Metrics original = compute_metrics(circuit);
    result.original_volume = original.gate_volume;

    if (config.verbose) {
      std::vector<QubitPair> pairs = extract_pairs(circuit);
      EdgeHistogram hist = build_histogram(pairs);
      log << "== " << input << ": volume " << original.gate_volume << ", depth "
          << original.depth << ", two-qubit gates " << pairs.size() << " ("
          << size_group(original.gate_volume) << ")\n";
      log << "trace: " << pairs.size() << " symbols, " << hist.distinct_pairs
          << " distinct, pair-count mean " << std::fixed << std::setprecision(1)
          << pair_count_mean(hist) << " stddev " << pair_count_stddev(hist) << "\n";
    }

    MapperState diagnostics;
    auto t0 = std::chrono::steady_clock::now();
    LayoutMap layout = map_circuit(circuit, graph, calibration, method,
                                   config.verbose ? &diagnostics : nullptr);
    auto t1 = std::chrono::steady_clock::now();
    result.mapping_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (config.verbose) {
      log << describe_rounds(diagnostics);
      std::ostringstream fb;
      for (const auto& [l, p] : layout.assignment()) {
        bool in_steps = false;
        for (const auto& s : diagnostics.steps) {
          for (const auto& [sl, sp] : s.assignments) {
            if (sl == l) in_steps = true;
          }
        }
        if (!in_steps) fb << " q" << l << "->" << p;
      }
      if (!fb.str().empty()) log << "fallback:" << fb.str() << "\n";
    }

    write_text_file(paths.remapped, qasm::emit_qasm(circuit, layout, graph.width));
    write_text_file(paths.layout,
                    layout_json(layout, graph.name, method_name(method)));

    if (!paths.metrics.empty() || config.compare_baselines) {
      std::vector<std::pair<std::string, LayoutMap>> layouts;
      layouts.emplace_back("identity", identity_layout(circuit, graph.width));
      layouts.emplace_back(method_name(method), layout);
      if (config.compare_baselines) {
        for (Method other : {Method::Ss, Method::Gf, Method::Gsf}) {
          if (other == method) continue;
          layouts.emplace_back(method_name(other),
                               map_circuit(circuit, graph, calibration, other));
        }
      }
      CompareReport report =
          compare_layouts(circuit, layouts, graph, config.decompose_swaps);
      result.has_metrics = true;
      result.depth_ratio = report.rows.at(1).depth_ratio;
      result.volume_ratio = report.rows.at(1).volume_ratio;
      result.swap_delta = report.rows.at(1).swap_delta;
      if (!batch || config.verbose) log << compare_report_table(report);
      if (!paths.metrics.empty()) {
        write_text_file(paths.metrics, compare_report_json(report));
      }
    }
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  result.log = log.str();
  return result;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs,
                                       bool& batch) {
  std::vector<std::string> files;
  batch = inputs.size() > 1;
  for (const auto& input : inputs) {
    if (fs::is_directory(input)) {
      batch = true;
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".qasm") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  return files;
}

struct GroupStats {
  long count = 0;
  long failed = 0;
  double depth_ratio_sum = 0.0;
  double volume_ratio_sum = 0.0;
  long swap_delta_sum = 0;
  long with_metrics = 0;
};

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Method method;
  try {
    method = method_from_string(config.method);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (config.inputs.empty()) {
    err << "error: no input circuits given\n";
    return 2;
  }
  if (config.workers < 1) {
    err << "error: --workers must be >= 1\n";
    return 2;
  }

  CouplingGraph graph;
  Calibration calibration;
  try {
    graph = load_topology(config.device_path);
    calibration = config.calibration_path.empty()
                      ? Calibration::zeros(graph.width)
                      : load_calibration(config.calibration_path, graph);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!graph.connected) {
    err << "warning: device '" << graph.name << "' coupling graph is not connected\n";
  }

  bool batch = false;
  std::vector<std::string> files = expand_inputs(config.inputs, batch);
  if (files.empty()) {
    err << "error: no .qasm inputs found\n";
    return 2;
  }

  // Resolve per-file artifact paths.
  std::vector<Paths> paths(files.size());
  try {
    if (batch) {
      fs::path out_dir = config.output_path.empty() ? "mapped" : config.output_path;
      fs::path layout_dir = config.layout_out.empty() ? "layouts" : config.layout_out;
      fs::create_directories(out_dir);
      fs::create_directories(layout_dir);
      fs::path metrics_dir;
      if (!config.metrics_out.empty()) {
        metrics_dir = config.metrics_out;
        fs::create_directories(metrics_dir);
      }
      for (std::size_t i = 0; i < files.size(); ++i) {
        std::string stem = fs::path(files[i]).stem().string();
        paths[i].remapped = (out_dir / (stem + ".qasm")).string();
        paths[i].layout = (layout_dir / (stem + ".layout.json")).string();
        if (!metrics_dir.empty()) {
          paths[i].metrics = (metrics_dir / (stem + ".metrics.json")).string();
        }
      }
    } else {
      std::string stem = fs::path(files[0]).stem().string();
      paths[0].remapped =
          config.output_path.empty() ? stem + "_mapped.qasm" : config.output_path;
      paths[0].layout =
          config.layout_out.empty() ? stem + "_layout.json" : config.layout_out;
      paths[0].metrics = config.metrics_out;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  std::vector<FileResult> results(files.size());
  auto worker = [&](std::atomic<std::size_t>& next) {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) break;
      results[i] =
          process_file(files[i], paths[i], graph, calibration, config, method, batch);
    }
  };

  auto batch_t0 = std::chrono::steady_clock::now();
  if (config.workers == 1 || files.size() == 1) {
    std::atomic<std::size_t> next{0};
    worker(next);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    int n = std::min<int>(config.workers, static_cast<int>(files.size()));
    threads.reserve(n);
    for (int t = 0; t < n; ++t) threads.emplace_back([&] { worker(next); });
    for (auto& t : threads) t.join();
  }
  auto batch_t1 = std::chrono::steady_clock::now();

  long failures = 0;
  double mapping_ms_total = 0.0;
  std::map<std::string, GroupStats> groups;
  for (const auto& r : results) {
    if (!r.log.empty()) out << r.log;
    if (!r.ok) {
      ++failures;
      err << "error: " << r.input << ": " << r.error << "\n";
      continue;
    }
    mapping_ms_total += r.mapping_ms;
    GroupStats& g = groups[size_group(r.original_volume)];
    ++g.count;
    if (r.has_metrics) {
      ++g.with_metrics;
      g.depth_ratio_sum += r.depth_ratio;
      g.volume_ratio_sum += r.volume_ratio;
      g.swap_delta_sum += r.swap_delta;
    }
  }

  if (batch) {
    double wall_s =
        std::chrono::duration<double>(batch_t1 - batch_t0).count();
    out << "batch: " << files.size() << " circuits, " << failures << " failed, method "
        << method_name(method) << ", device " << graph.name << "\n";
    out << std::fixed << std::setprecision(1) << "mapping time " << mapping_ms_total / 1000.0
        << "s total, wall " << wall_s << "s, workers " << config.workers << "\n";
    nlohmann::ordered_json summary;
    summary["method"] = method_name(method);
    summary["device"] = graph.name;
    summary["circuits"] = files.size();
    summary["failed"] = failures;
    summary["mapping_seconds"] = mapping_ms_total / 1000.0;
    nlohmann::ordered_json group_rows = nlohmann::ordered_json::array();
    for (const auto& [label, g] : groups) {
      out << "  " << label << ": " << g.count << " circuit(s)";
      nlohmann::ordered_json row;
      row["group"] = label;
      row["count"] = g.count;
      if (g.with_metrics > 0) {
        double dr = g.depth_ratio_sum / g.with_metrics;
        double vr = g.volume_ratio_sum / g.with_metrics;
        out << std::setprecision(3) << ", mean depth ratio " << dr
            << ", mean volume ratio " << vr << ", swap delta total " << g.swap_delta_sum;
        row["mean_depth_ratio"] = dr;
        row["mean_volume_ratio"] = vr;
        row["swap_delta_total"] = g.swap_delta_sum;
      }
      out << "\n";
      group_rows.push_back(std::move(row));
    }
    summary["groups"] = group_rows;
    if (!config.metrics_out.empty()) {
      try {
        write_text_file((fs::path(config.metrics_out) / "summary.json").string(),
                        summary.dump(2) + "\n");
      } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        ++failures;
      }
    }
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace qlayout
