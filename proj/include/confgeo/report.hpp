#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace confgeo {

// One check line of a run report. runtime_ms stays 0 unless timing is
// requested, so that identical configurations produce byte-identical
// reports.
struct CheckRow {
  std::string experiment;
  std::string check;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  long runtime_ms = 0;
};

std::string format_double(double v);

// CSV with header experiment,check,value,bound,pass,runtime_ms.
std::string report_csv(const std::vector<CheckRow>& rows);
void write_report_file(const std::vector<CheckRow>& rows,
                       const std::string& path);
std::vector<CheckRow> read_report_file(const std::string& path);

// Per-row deltas between two reports keyed by (experiment, check).
// Returns 0 when keys match and no pass flag regressed, 1 on a regression,
// 2 on a key mismatch.
int report_diff(const std::vector<CheckRow>& a, const std::vector<CheckRow>& b,
                std::ostream& out);

// Parallelism cap: CONFGEO_THREADS when set, else 1.
int thread_cap();

// Deterministic index-ordered parallel map over [0, n).
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace confgeo
