#pragma once

#include <string>
#include <vector>

#include "confgeo/config.hpp"
#include "confgeo/report.hpp"

namespace confgeo {

struct ExperimentConfig {
  std::string experiment;
  int res = 256;
  int kmax = 20;
  int trials = 20;
  unsigned seed = 7;
  std::string out_dir = ".";
  bool timings = false;    // fill runtime_ms (breaks byte-determinism)
  bool dump_fields = true; // write representative fields as CONFGRID
  bool plots = false;      // also render the dumped fields as SVG
  Constants constants;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
};

extern const std::vector<std::string> kExperimentNames;
bool known_experiment(const std::string& name);

// Runs the named experiment and returns its check rows. Throws on unknown
// names or invalid configuration.
std::vector<CheckRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace confgeo
