#include "confgeo/report.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace confgeo {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string report_csv(const std::vector<CheckRow>& rows) {
  std::string out = "experiment,check,value,bound,pass,runtime_ms\n";
  for (const auto& r : rows) {
    out += r.experiment;
    out += ',';
    out += r.check;
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_double(r.bound);
    out += ',';
    out += r.pass ? "1" : "0";
    out += ',';
    out += std::to_string(r.runtime_ms);
    out += '\n';
  }
  return out;
}

void write_report_file(const std::vector<CheckRow>& rows,
                       const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << report_csv(rows);
}

std::vector<CheckRow> read_report_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("report: empty file");
  if (line.rfind("experiment,check,", 0) != 0)
    throw std::runtime_error("report: bad header");
  std::vector<CheckRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    CheckRow r;
    if (!std::getline(ss, r.experiment, ',') ||
        !std::getline(ss, r.check, ','))
      throw std::runtime_error("report: bad row");
    try {
      if (!std::getline(ss, tok, ',')) throw std::runtime_error("short");
      r.value = std::stod(tok);
      if (!std::getline(ss, tok, ',')) throw std::runtime_error("short");
      r.bound = std::stod(tok);
      if (!std::getline(ss, tok, ',')) throw std::runtime_error("short");
      r.pass = std::stoi(tok) != 0;
      if (std::getline(ss, tok, ',')) r.runtime_ms = std::stol(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("report: bad row '" + line + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

int report_diff(const std::vector<CheckRow>& a, const std::vector<CheckRow>& b,
                std::ostream& out) {
  std::map<std::pair<std::string, std::string>, const CheckRow*> bm;
  for (const auto& r : b) bm[{r.experiment, r.check}] = &r;
  if (a.size() != b.size()) {
    out << "row count differs: " << a.size() << " vs " << b.size() << "\n";
    return 2;
  }
  bool regressed = false;
  for (const auto& r : a) {
    auto it = bm.find({r.experiment, r.check});
    if (it == bm.end()) {
      out << "missing key: " << r.experiment << "," << r.check << "\n";
      return 2;
    }
    const CheckRow& s = *it->second;
    out << r.experiment << "," << r.check << ": dvalue="
        << format_double(s.value - r.value)
        << " dbound=" << format_double(s.bound - r.bound) << " pass "
        << (r.pass ? "1" : "0") << "->" << (s.pass ? "1" : "0") << "\n";
    if (r.pass && !s.pass) regressed = true;
  }
  return regressed ? 1 : 0;
}

int thread_cap() {
  const char* env = std::getenv("CONFGEO_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  if (n < 1) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0 && n > static_cast<int>(hw)) n = static_cast<int>(hw);
  return n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  int threads = std::min(thread_cap(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace confgeo
