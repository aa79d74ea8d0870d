#include <iostream>

#include <CLI11.hpp>

#include "qlayout/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "qlayout: initial qubit placement for OpenQASM 2.0 circuits.\n"
      "Detects repeated two-qubit interaction patterns and global usage\n"
      "frequencies to build a logical-to-physical layout, then emits the\n"
      "remapped program, the layout map, and optional routing metrics."};

  qlayout::RunConfig config;
  app.add_option("-i,--input", config.inputs,
                 "Input .qasm file(s) or directory of circuits")
      ->required();
  app.add_option("-d,--device", config.device_path,
                 "Device topology JSON {name, width, edges}")
      ->required();
  app.add_option("-c,--calibration", config.calibration_path,
                 "Optional calibration JSON (defaults to all-zero errors)");
  app.add_option("-m,--method", config.method, "Mapping method")
      ->check(CLI::IsMember({"ss", "gf", "gsf"}))
      ->default_val("gsf");
  app.add_option("-o,--output", config.output_path,
                 "Remapped QASM output file (directory in batch mode)");
  app.add_option("--layout-out", config.layout_out,
                 "Layout JSON output file (directory in batch mode)");
  app.add_option("--metrics-out", config.metrics_out,
                 "Metrics report JSON file (directory in batch mode)");
  app.add_flag("--compare-baselines", config.compare_baselines,
               "Compare all three methods against the identity layout");
  app.add_flag("--decompose-swaps", config.decompose_swaps,
               "Report gate volume with each swap counted as 3 gates");
  app.add_option("-w,--workers", config.workers, "Batch worker threads")
      ->default_val(1);
  app.add_flag("-v,--verbose", config.verbose,
               "Trace mapping rounds and steps per circuit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  return qlayout::run(config, std::cout, std::cerr);
}
