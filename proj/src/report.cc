#include "ckc/report.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ckc/cascade.h"

namespace ckc {

namespace {

std::string Fixed(double x, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << x;
  return out.str();
}

// Quotes a CSV field when it contains a separator, quote or newline.
std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double GapPercent(int ub, int lb) { return ub > 0 ? 100.0 * (ub - lb) / ub : 0.0; }

std::string RunReport::ToJson() const {
  using nlohmann::json;
  json j;
  j["instance"] = instance;
  j["n_before"] = nodes_before;
  j["m_before"] = edges_before;
  j["n_after"] = nodes_after;
  j["m_after"] = edges_after;
  j["k"] = k;
  j["b"] = b;
  j["method"] = method;
  j["status"] = status;
  j["value"] = value ? json(*value) : json(nullptr);
  j["lb"] = lb ? json(*lb) : json(nullptr);
  j["gap_pct"] = gap_pct ? json(*gap_pct) : json(nullptr);
  j["time_s"] = time_s;
  j["nodes"] = nodes;
  json cj = json::object();
  for (int c = 0; c < kNumCutKinds; ++c) cj[std::string(CutKindName(static_cast<CutKind>(c)))] = cuts[c];
  j["cuts"] = cj;
  j["set"] = set;
  if (!error.empty()) j["error"] = error;
  return j.dump();
}

RunReport RunSolve(const Graph& g, const std::string& name, int k, int b, const SolverConfig& cfg) {
  RunReport report;
  report.instance = name;
  report.nodes_before = g.num_nodes();
  report.edges_before = g.num_edges();
  report.k = k;
  report.b = b;
  report.method = std::string(MethodName(cfg.method));

  const Instance inst = Preprocess(Instance(g, k, b, name));
  report.nodes_after = inst.n();
  report.edges_after = inst.graph.num_edges();
  const SolverResult result = Solve(inst, cfg);
  report.status = std::string(StatusName(result.status));
  report.time_s = result.wall_time;
  report.nodes = result.nodes_explored;
  report.cuts = result.cuts_added;
  if (result.status != SolveStatus::kInfeasible) {
    report.value = result.best_value;
    report.lb = result.proven_lb;
    report.gap_pct = GapPercent(result.best_value, result.proven_lb);
    for (NodeId v : result.best_w.ToVector()) report.set.push_back(inst.graph.label(v));
  }
  return report;
}

std::string CsvHeader() { return "instance,k,b,method,status,value,lb,gap_pct,time_s,nodes"; }

std::string CsvRow(const RunReport& r) {
  std::ostringstream out;
  out << CsvField(r.instance) << ',' << r.k << ',' << r.b << ',' << r.method << ',' << r.status << ',';
  if (r.value) out << *r.value;
  out << ',';
  if (r.lb) out << *r.lb;
  out << ',';
  if (r.gap_pct) out << Fixed(*r.gap_pct, 2);
  out << ',' << Fixed(r.time_s, 3) << ',' << r.nodes;
  return out.str();
}

std::string CsvFooter(const std::vector<RunReport>& reports) {
  int optimal = 0, with_value = 0;
  double gap_sum = 0.0, time_sum = 0.0;
  for (const RunReport& r : reports) {
    optimal += r.status == "optimal";
    if (!r.gap_pct) continue;
    ++with_value;
    gap_sum += *r.gap_pct;
    time_sum += r.time_s;
  }
  const double mean_gap = with_value ? gap_sum / with_value : 0.0;
  const double mean_time = with_value ? time_sum / with_value : 0.0;
  return "# summary: opt=" + std::to_string(optimal) + ", mean_gap_pct=" + Fixed(mean_gap, 2) +
         ", mean_time_s=" + Fixed(mean_time, 3);
}

BenchManifest ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("manifest is not valid JSON: ") + e.what());
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  BenchManifest manifest;
  try {
    manifest.time_limit = j.value("time_limit", manifest.time_limit);
    manifest.threads = std::max(1, j.value("threads", manifest.threads));
    std::vector<std::string> methods = j.value("methods", std::vector<std::string>{"bnb"});
    if (!j.contains("instances") || !j["instances"].is_array()) throw ParseError(0, "manifest needs an instances array");
    for (const auto& item : j["instances"]) {
      const std::string graph = item.at("graph").get<std::string>();
      std::filesystem::path graph_path(graph);
      if (graph_path.is_relative()) graph_path = base / graph_path;
      const std::string name = item.value("name", std::filesystem::path(graph).stem().string());
      const int k = item.at("k").get<int>();
      std::vector<int> budgets;
      if (item.at("b").is_array()) {
        budgets = item["b"].get<std::vector<int>>();
      } else {
        budgets.push_back(item["b"].get<int>());
      }
      const std::vector<std::string> own = item.value("methods", methods);
      for (int b : budgets) {
        for (const std::string& m : own) manifest.entries.push_back({name, graph_path.string(), k, b, ParseMethod(m)});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad manifest entry: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return manifest;
}

std::vector<RunReport> RunBench(const BenchManifest& manifest, const SolverConfig& base) {
  std::vector<RunReport> reports(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.entries.size(); i = next++) {
      const BenchEntry& e = manifest.entries[i];
      SolverConfig cfg = base;
      cfg.method = e.method;
      cfg.time_limit = manifest.time_limit;
      try {
        reports[i] = RunSolve(ReadEdgeListFile(e.graph_path), e.name, e.k, e.b, cfg);
      } catch (const std::exception& ex) {
        RunReport failed;
        failed.instance = e.name;
        failed.k = e.k;
        failed.b = e.b;
        failed.method = std::string(MethodName(e.method));
        failed.status = "error";
        failed.error = ex.what();
        reports[i] = std::move(failed);
      }
    }
  };
  const int threads = std::max(1, std::min<int>(manifest.threads, static_cast<int>(manifest.entries.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return reports;
}

}  // namespace ckc
