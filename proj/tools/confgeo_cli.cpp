#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "confgeo/experiments.hpp"
#include "confgeo/field.hpp"
#include "confgeo/report.hpp"
#include "confgeo/svg.hpp"

namespace fs = std::filesystem;
using namespace confgeo;

namespace {

int cmd_run(ExperimentConfig cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckRow> rows;
  try {
    rows = run_experiment(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (cfg.timings) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    for (auto& r : rows) r.runtime_ms = ms / static_cast<long>(rows.size());
  }
  fs::create_directories(cfg.out_dir);
  std::string path = cfg.out_dir + "/report.csv";
  write_report_file(rows, path);
  bool all_pass = true;
  for (const auto& r : rows) {
    std::cout << (r.pass ? "pass " : "FAIL ") << r.experiment << "."
              << r.check << " value=" << format_double(r.value)
              << " bound=" << format_double(r.bound) << "\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "all checks passed" : "some checks failed")
            << " (" << rows.size() << " rows) -> " << path << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal-metric laboratory"};
  app.require_subcommand(0, 1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment, write report.csv");
  std::string experiment;
  ExperimentConfig cfg;
  std::string config_path;
  bool print_defaults = false;
  run->add_option("experiment", experiment, "one of: main1 neck brezis-merle "
                  "collapse bubble sphere-pinch gh-converge k-ge-1");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--res", cfg.res, "grid resolution");
  run->add_option("--kmax", cfg.kmax, "largest sequence index");
  run->add_option("--trials", cfg.trials, "number of random trials");
  run->add_option("--seed", cfg.seed, "rng seed");
  run->add_option("--out", cfg.out_dir, "output directory");
  run->add_flag("--timings", cfg.timings,
                "record wall time per row (breaks byte determinism)");
  run->add_flag("--plot", cfg.plots, "render dumped fields as SVG");
  run->add_flag("--print-defaults", print_defaults,
                "print the full default config as JSON and exit");

  // plot
  auto* plot = app.add_subcommand("plot", "render a CONFGRID file as SVG");
  std::string field_path, svg_path;
  plot->add_option("field", field_path, "CONFGRID input")->required();
  plot->add_option("--out", svg_path, "SVG output (default: stdout)");

  // report-diff
  auto* rd = app.add_subcommand("report-diff", "compare two report files");
  std::string report_a, report_b;
  rd->add_option("a", report_a, "baseline report.csv")->required();
  rd->add_option("b", report_b, "candidate report.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      if (print_defaults) {
        ExperimentConfig defaults;
        defaults.experiment = experiment.empty() ? "main1" : experiment;
        std::cout << defaults.to_json();
        return 0;
      }
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          std::cerr << "error: cannot open " << config_path << "\n";
          return 2;
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        ExperimentConfig file_cfg = ExperimentConfig::from_json(text);
        // Command-line values override file values.
        if (run->count("--res") == 0) cfg.res = file_cfg.res;
        if (run->count("--kmax") == 0) cfg.kmax = file_cfg.kmax;
        if (run->count("--trials") == 0) cfg.trials = file_cfg.trials;
        if (run->count("--seed") == 0) cfg.seed = file_cfg.seed;
        if (run->count("--out") == 0) cfg.out_dir = file_cfg.out_dir;
        if (run->count("--timings") == 0) cfg.timings = file_cfg.timings;
        if (run->count("--plot") == 0) cfg.plots = file_cfg.plots;
        cfg.dump_fields = file_cfg.dump_fields;
        cfg.constants = file_cfg.constants;
        if (experiment.empty()) experiment = file_cfg.experiment;
      }
      if (experiment.empty()) {
        std::cerr << "error: no experiment given\n";
        return 2;
      }
      if (!known_experiment(experiment)) {
        std::cerr << "error: unknown experiment '" << experiment << "'\n";
        return 2;
      }
      cfg.experiment = experiment;
      return cmd_run(cfg);
    }
    if (plot->parsed()) {
      ScalarField f = read_confgrid_file(field_path);
      std::string svg = svg_heatmap(f);
      if (svg_path.empty()) {
        std::cout << svg;
      } else {
        std::ofstream out(svg_path, std::ios::binary);
        if (!out) {
          std::cerr << "error: cannot open " << svg_path << "\n";
          return 2;
        }
        out << svg;
      }
      return 0;
    }
    if (rd->parsed()) {
      std::vector<CheckRow> a = read_report_file(report_a);
      std::vector<CheckRow> b = read_report_file(report_b);
      return report_diff(a, b, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << app.help();
  return 2;
}
