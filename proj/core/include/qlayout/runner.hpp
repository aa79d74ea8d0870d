#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlayout {

/// Configuration of one tool invocation (single circuit or batch directory).
struct RunConfig {
  std::vector<std::string> inputs;  // .qasm files or directories of them
  std::string device_path;
  std::string calibration_path;     // optional
  std::string method = "gsf";       // ss | gf | gsf
  std::string output_path;          // remapped QASM file, or directory in batch mode
  std::string layout_out;           // layout JSON file, or directory in batch mode
  std::string metrics_out;          // metrics JSON; empty disables metrics
  bool compare_baselines = false;   // add all three methods to the metrics report
  bool decompose_swaps = false;
  bool verbose = false;
  int workers = 1;
};

/// Runs the pipeline: parse, map, fallback-complete, emit remapped QASM,
/// write layout JSON, optionally route and report metrics against the
/// identity baseline. Batch inputs aggregate per-group statistics by
/// original circuit size. Returns the process exit status: 0 on full
/// success, 1 when any input failed or the device could not be loaded,
/// 2 on configuration errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Size-group label (G1..G9) for a pre-compilation gate count.
std::string size_group(long gate_volume);

}  // namespace qlayout
