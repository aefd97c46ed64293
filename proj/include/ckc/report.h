// Per-run experiment reports, CSV/JSON rendering and benchmark manifests.

#ifndef CKC_REPORT_H_
#define CKC_REPORT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ckc/graph.h"
#include "ckc/solver.h"

namespace ckc {

struct RunReport {
  std::string instance;
  std::size_t nodes_before = 0;
  std::size_t edges_before = 0;
  std::size_t nodes_after = 0;
  std::size_t edges_after = 0;
  int k = 0;
  int b = 0;
  std::string method;
  // "optimal", "feasible", "infeasible" or "error".
  std::string status;
  std::optional<int> value;
  std::optional<int> lb;
  std::optional<double> gap_pct;
  double time_s = 0.0;
  std::uint64_t nodes = 0;
  std::array<std::size_t, kNumCutKinds> cuts{};
  // Interdicted node labels.
  std::vector<std::string> set;
  std::string error;

  std::string ToJson() const;
};

// 100 (ub - lb) / ub; 0 when ub = 0.
double GapPercent(int ub, int lb);

// Preprocesses G to its k-core, runs the configured method and fills a
// report. Solver exceptions propagate.
RunReport RunSolve(const Graph& g, const std::string& name, int k, int b, const SolverConfig& cfg);

// Column order: instance,k,b,method,status,value,lb,gap_pct,time_s,nodes.
std::string CsvHeader();
std::string CsvRow(const RunReport& report);
// "# summary: opt=<rows with status optimal>, mean_gap_pct=<..>,
// mean_time_s=<..>"; means over rows that produced a value.
std::string CsvFooter(const std::vector<RunReport>& reports);

struct BenchEntry {
  std::string name;
  std::string graph_path;
  int k = 1;
  int b = 0;
  Method method = Method::kBranchAndBound;
};

struct BenchManifest {
  std::vector<BenchEntry> entries;
  double time_limit = 7200.0;
  int threads = 1;
};

// {"time_limit": s, "threads": t, "methods": [...],
//  "instances": [{"name", "graph", "k", "b": int or [ints], "methods"?}]}.
// Relative graph paths resolve against the manifest's directory; one entry
// per (instance, b, method) in file order. Throws ParseError on bad input.
BenchManifest ReadManifest(const std::string& path);

// Runs every entry; a failing entry yields a status "error" row. Rows come
// back in entry order whatever the thread count.
std::vector<RunReport> RunBench(const BenchManifest& manifest, const SolverConfig& base);

}  // namespace ckc

#endif  // CKC_REPORT_H_
