// collapse_core: k-core decomposition, collapsed k-core solvers, model
// emission and benchmark sweeps.
//
// Exit codes: 0 success, 1 other failure, 2 unreadable input, parse or usage
// error,
// 3 infeasible instance, 4 time limit hit with a feasible solution.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckc/bounds.h"
#include "ckc/cascade.h"
#include "ckc/graph.h"
#include "ckc/inequalities.h"
#include "ckc/lp.h"
#include "ckc/model.h"
#include "ckc/report.h"
#include "ckc/solver.h"

namespace {

using namespace ckc;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTimeLimit = 4;

struct Common {
  std::string graph_path;
  int k = 2;
  int b = 1;
  std::string format = "json";
  std::string out;
};

// Writes to --out when given, stdout otherwise.
void Emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::string NameOf(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

// Unreadable input counts as an input error, like a malformed file.
Graph LoadGraph(const std::string& path) {
  if (!std::ifstream(path)) throw ParseError(0, "cannot open " + path);
  return ReadEdgeListFile(path);
}

int ExitFor(const std::string& status) {
  if (status == "infeasible") return kExitInfeasible;
  if (status == "feasible") return kExitTimeLimit;
  return kExitOk;
}

int Decompose(const Common& c) {
  const Graph g = LoadGraph(c.graph_path);
  const CoreDecomposition cores = DecomposeCores(g);
  const NodeSet core = cores.AtLeast(c.k);
  const std::size_t edges = EdgesWithin(g, core);
  if (c.format == "json") {
    nlohmann::json j;
    j["graph"] = c.graph_path;
    j["k"] = c.k;
    j["nodes"] = core.size();
    j["edges"] = edges;
    j["n"] = g.num_nodes();
    j["m"] = g.num_edges();
    nlohmann::json hist = nlohmann::json::object();
    for (std::size_t i = 0; i < cores.layers.size(); ++i) hist[std::to_string(i)] = cores.layers[i].size();
    j["coreness_histogram"] = hist;
    Emit(c.out, j.dump() + "\n");
  } else {
    std::ostringstream text;
    text << core.size() << ' ' << edges << "\n";
    text << "# coreness count\n";
    for (std::size_t i = 0; i < cores.layers.size(); ++i) text << i << ' ' << cores.layers[i].size() << "\n";
    Emit(c.out, text.str());
  }
  return kExitOk;
}

int SolveCommand(const Common& c, const SolverConfig& cfg) {
  const Graph g = LoadGraph(c.graph_path);
  const RunReport report = RunSolve(g, NameOf(c.graph_path), c.k, c.b, cfg);
  if (c.format == "csv") {
    Emit(c.out, CsvHeader() + "\n" + CsvRow(report) + "\n" + CsvFooter({report}) + "\n");
  } else {
    Emit(c.out, report.ToJson() + "\n");
  }
  return ExitFor(report.status);
}

NodeSet ParseRemoved(const Graph& g, const std::string& list) {
  std::map<std::string, NodeId> by_label;
  for (NodeId v = 0; v < static_cast<NodeId>(g.num_nodes()); ++v) by_label.emplace(g.label(v), v);
  NodeSet out(g.num_nodes());
  std::stringstream in(list);
  std::string label;
  while (std::getline(in, label, ',')) {
    if (label.empty()) continue;
    auto it = by_label.find(label);
    if (it == by_label.end()) throw ParseError(0, "unknown node label " + label);
    out.insert(it->second);
  }
  return out;
}

struct EmitFlags {
  std::string model = "td";
  bool with_cuts = false;
  bool linearize = false;
  double big_m = 0.0;
  std::string remove;
};

int EmitCommand(const Common& c, const EmitFlags& f) {
  const Graph g = LoadGraph(c.graph_path);
  const Instance inst = Preprocess(Instance(g, c.k, c.b, NameOf(c.graph_path)));
  if (f.model != "detect" && static_cast<std::size_t>(c.b) > inst.n()) {
    std::cerr << "budget exceeds the " << inst.n() << "-node k-core\n";
    return kExitInfeasible;
  }
  if (f.model == "dual" && !f.linearize && c.format != "json") {
    std::cerr << "the dual model has bilinear terms; pass --linearize or --format json\n";
    return kExitParse;
  }
  ModelIR ir;
  if (f.model == "td") {
    ir = EmitTimeDependent(inst, {.with_cuts = f.with_cuts});
  } else if (f.model == "sparse") {
    CutPool pool;
    if (f.with_cuts) {
      const FollowersTable table = ComputeFollowersTable(inst);
      pool.Add(DominanceCuts(table));
      pool.Add(SymmetryCuts(table));
      if (FollowerAssumptionHolds(inst)) pool.Add(FollowerCuts(inst, table).cuts);
      const int m = LowerBoundM(inst).m;
      if (static_cast<int>(inst.n()) > m) pool.Add(BigMCut(inst, NodeSet::Full(inst.n()), m));
    }
    ir = EmitSparseMaster(inst, pool);
  } else if (f.model == "dual") {
    ir = EmitNonlinearDual(inst, {.linearize = f.linearize, .big_m = f.big_m});
  } else {
    ir = EmitDetectionLp(inst.graph, c.k, ParseRemoved(inst.graph, f.remove));
    ir.name = inst.name + "_detect";
  }
  if (c.format == "json") {
    Emit(c.out, ir.ToJson() + "\n");
  } else {
    Emit(c.out, WriteLpText(ir));
  }
  return kExitOk;
}

int BenchCommand(const std::string& manifest_path, const std::string& out, const std::string& format,
                 const SolverConfig& cfg, int threads) {
  BenchManifest manifest = ReadManifest(manifest_path);
  if (threads > 0) manifest.threads = threads;
  if (std::isfinite(cfg.time_limit)) manifest.time_limit = cfg.time_limit;
  const std::vector<RunReport> reports = RunBench(manifest, cfg);
  std::string text;
  if (format == "json") {
    text = "[";
    for (std::size_t i = 0; i < reports.size(); ++i) text += (i ? "," : "") + reports[i].ToJson();
    text += "]\n";
  } else {
    text = CsvHeader() + "\n";
    for (const RunReport& r : reports) text += CsvRow(r) + "\n";
    text += CsvFooter(reports) + "\n";
  }
  Emit(out, text);
  for (const RunReport& r : reports) {
    if (r.status == "error") std::cerr << r.instance << " (" << r.method << ", b=" << r.b << "): " << r.error << "\n";
  }
  return kExitOk;
}

void AddSolverFlags(CLI::App* cmd, SolverConfig& cfg, bool& no_dom, bool& no_sym, bool& no_fol) {
  cmd->add_option("--time-limit", cfg.time_limit, "seconds");
  cmd->add_flag("--no-dominance", no_dom);
  cmd->add_flag("--no-symmetry", no_sym);
  cmd->add_flag("--no-followers", no_fol);
  cmd->add_option("--u-threshold", cfg.u_threshold)->check(CLI::PositiveNumber);
  cmd->add_option("--ell-offset", cfg.ell_offset)->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collapsed k-core: decomposition, exact solvers and model emission"};
  app.require_subcommand(1);

  Common common;
  SolverConfig cfg;
  std::string method = "bnb";
  bool no_dom = false, no_sym = false, no_fol = false;
  EmitFlags emit;
  std::string manifest;
  int threads = 0;

  auto* decompose = app.add_subcommand("decompose", "k-core size and coreness histogram");
  decompose->add_option("graph", common.graph_path)->required();
  decompose->add_option("--k", common.k)->required()->check(CLI::NonNegativeNumber);
  decompose->add_option("--format", common.format)->check(CLI::IsMember({"json", "text"}));
  decompose->add_option("--out", common.out);

  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("graph", common.graph_path)->required();
  solve->add_option("--k", common.k)->required()->check(CLI::PositiveNumber);
  solve->add_option("--b", common.b)->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--out", common.out);
  solve->add_option("--method", method, "brute, bnb or cutting-plane")->check(CLI::IsMember({"brute", "bnb", "cutting-plane"}));
  AddSolverFlags(solve, cfg, no_dom, no_sym, no_fol);

  auto* emit_cmd = app.add_subcommand("emit", "write a model as LP text or JSON IR");
  emit_cmd->add_option("graph", common.graph_path)->required();
  emit_cmd->add_option("--k", common.k)->required()->check(CLI::PositiveNumber);
  emit_cmd->add_option("--b", common.b)->required()->check(CLI::NonNegativeNumber);
  emit_cmd->add_option("--model", emit.model)->check(CLI::IsMember({"td", "sparse", "dual", "detect"}));
  emit_cmd->add_flag("--with-cuts", emit.with_cuts);
  emit_cmd->add_flag("--linearize", emit.linearize);
  emit_cmd->add_option("--big-m", emit.big_m, "McCormick bound on lambda, 0 selects n");
  emit_cmd->add_option("--remove", emit.remove, "comma-separated labels interdicted in the detection LP");
  emit_cmd->add_option("--format", common.format)->check(CLI::IsMember({"lp", "json"}));
  emit_cmd->add_option("--out", common.out);

  auto* bench = app.add_subcommand("bench", "run a manifest of instances and methods");
  bench->add_option("manifest", manifest)->required();
  bench->add_option("--out", common.out);
  bench->add_option("--format", common.format)->check(CLI::IsMember({"json", "csv"}));
  bench->add_option("--threads", threads)->check(CLI::NonNegativeNumber);
  AddSolverFlags(bench, cfg, no_dom, no_sym, no_fol);

  common.format.clear();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*decompose) {
      if (common.format.empty()) common.format = "text";
      return Decompose(common);
    }
    if (*solve) {
      if (common.format.empty()) common.format = "json";
      cfg.method = ParseMethod(method);
      cfg.use_dominance = !no_dom;
      cfg.use_symmetry = !no_sym;
      cfg.use_followers = !no_fol;
      return SolveCommand(common, cfg);
    }
    if (*emit_cmd) {
      if (common.format.empty()) common.format = "lp";
      return EmitCommand(common, emit);
    }
    if (common.format.empty()) common.format = "csv";
    cfg.use_dominance = !no_dom;
    cfg.use_symmetry = !no_sym;
    cfg.use_followers = !no_fol;
    return BenchCommand(manifest, common.out, common.format, cfg, threads);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
