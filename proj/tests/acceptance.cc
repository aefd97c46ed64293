// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. COLLAPSE_CORE_SEED changes the random instances.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ckc/bounds.h"
#include "ckc/cascade.h"
#include "ckc/inequalities.h"
#include "ckc/lp.h"
#include "ckc/model.h"
#include "ckc/report.h"
#include "ckc/solver.h"
#include "fixtures.h"

using namespace ckc;
using namespace ckc::testing;

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void Fail(const std::string& why) {
    if (!pass) detail << "; ";
    pass = false;
    detail << why;
  }
};

int failures = 0;

void Report(int id, const std::string& title, Outcome& o, const std::string& summary) {
  std::printf("criterion %d: %s  %s: %s%s%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), summary.c_str(),
              o.pass ? "" : " | ", o.pass ? "" : o.detail.str().c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

bool HaveData(const std::string& name) { return std::filesystem::exists(DataPath(name + ".txt")); }

Graph Load(const std::string& name) { return ReadEdgeListFile(DataPath(name + ".txt")); }

int Survivors(const Instance& inst, const std::vector<NodeId>& w) { return NaiveSurvivors(inst.graph, w, inst.k); }

// ---------------------------------------------------------------------------

void PreprocessingReproduction() {
  struct Row {
    const char* network;
    int k;
    std::size_t nodes, edges;
  };
  const Row rows[] = {
      {"karate", 2, 33, 77},     {"dolphins", 3, 45, 135},  {"dolphins", 4, 36, 109}, {"lesmis", 6, 38, 186},
      {"lesmis", 4, 41, 197},    {"lesmis", 3, 48, 215},    {"lesmis", 2, 59, 236},   {"football", 8, 114, 606},
      {"football", 7, 115, 613}, {"polbooks", 2, 105, 441}, {"polbooks", 3, 103, 437}, {"polbooks", 4, 98, 422},
      {"polbooks", 5, 65, 300},
  };
  Outcome o;
  int matched = 0;
  double slowest = 0.0;
  for (const Row& r : rows) {
    if (!HaveData(r.network)) {
      o.Fail(std::string(r.network) + " k=" + std::to_string(r.k) + ": data/" + r.network + ".txt missing");
      continue;
    }
    const auto start = Clock::now();
    const Graph g = Load(r.network);
    const NodeSet core = KCore(g, r.k);
    const std::size_t edges = EdgesWithin(g, core);
    const double t = Since(start);
    slowest = std::max(slowest, t);
    if (core.size() != r.nodes || edges != r.edges) {
      o.Fail(std::string(r.network) + " k=" + std::to_string(r.k) + ": got " + std::to_string(core.size()) + "/" +
             std::to_string(edges));
    } else if (t >= 1.0) {
      o.Fail(std::string(r.network) + " took " + std::to_string(t) + " s");
    } else {
      ++matched;
    }
  }
  std::ostringstream s;
  s << matched << "/" << std::size(rows) << " (network, k) rows exact, slowest " << slowest << " s";
  Report(1, "preprocessing reproduction", o, s.str());
}

// ---------------------------------------------------------------------------

struct LpCase {
  Graph g;
  int k;
  NodeSet w;
  std::vector<NodeId> removed;
};

std::vector<LpCase> LpCases() {
  std::mt19937_64 rng(FixtureSeed() + 2);
  std::vector<LpCase> out;
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + static_cast<int>(rng() % 59);
    const double p = 0.1 + 0.4 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const int k = 2 + static_cast<int>(rng() % 3);
    LpCase c{RandomGraph(n, p, rng), k, NodeSet(n), {}};
    const int size = std::min(n, static_cast<int>(rng() % 4));
    std::vector<NodeId> ids(n);
    for (int v = 0; v < n; ++v) ids[v] = v;
    std::shuffle(ids.begin(), ids.end(), rng);
    for (int j = 0; j < size; ++j) {
      c.w.insert(ids[j]);
      c.removed.push_back(ids[j]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

void IntegralityAndDuality(const std::vector<LpCase>& cases) {
  Outcome integral, dual;
  const auto start = Clock::now();
  int ok_integral = 0, ok_dual = 0;
  double worst_dual = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const LpCase& c = cases[i];
    const int n = static_cast<int>(c.g.num_nodes());
    const int expected = n - NaiveSurvivors(c.g, c.removed, c.k);
    const LpProblem primal = BuildDetectionLp(c.g, c.k, c.w);
    const LpSolution ps = SimplexSolve(primal);
    if (ps.status != LpStatus::kOptimal) {
      integral.Fail("case " + std::to_string(i) + ": primal " + std::string(LpStatusName(ps.status)));
      dual.Fail("case " + std::to_string(i) + ": no primal optimum");
      continue;
    }
    if (!VerifyIntegrality(primal, ps, 1e-6)) {
      integral.Fail("case " + std::to_string(i) + ": fractional u");
    } else if (std::fabs(ps.objective - expected) > 1e-6) {
      integral.Fail("case " + std::to_string(i) + ": value " + std::to_string(ps.objective) + " vs " + std::to_string(expected));
    } else {
      ++ok_integral;
    }
    const LpSolution ds = SimplexSolve(BuildDual(c.g, c.k, c.w));
    const double gap = std::fabs(ds.objective - ps.objective);
    worst_dual = std::max(worst_dual, gap / (1.0 + std::fabs(ps.objective)));
    if (ds.status != LpStatus::kOptimal || gap > 1e-7 * (1.0 + std::fabs(ps.objective))) {
      dual.Fail("case " + std::to_string(i) + ": dual " + std::to_string(ds.objective) + " vs " + std::to_string(ps.objective));
    } else {
      ++ok_dual;
    }
  }
  const double t = Since(start);
  if (t >= 120.0) integral.Fail("runtime " + std::to_string(t) + " s");
  std::ostringstream s2, s3;
  s2 << ok_integral << "/" << cases.size() << " detection-LP optima integral and equal to n - |core|, " << t << " s for both LP suites";
  Report(2, "LP integrality", integral, s2.str());
  s3 << ok_dual << "/" << cases.size() << " dual optima match, worst relative gap " << worst_dual;
  Report(3, "strong duality", dual, s3.str());
}

// ---------------------------------------------------------------------------

struct Named {
  std::string label;
  Instance inst;
};

void OracleEquivalence() {
  Outcome o;
  std::vector<Named> list;
  const auto add_public = [&](const std::string& network, int k, std::vector<int> budgets) {
    if (!HaveData(network)) {
      for (int b : budgets) o.Fail(network + " k=" + std::to_string(k) + " b=" + std::to_string(b) + ": data missing");
      return;
    }
    for (int b : budgets) {
      list.push_back({network + " k=" + std::to_string(k) + " b=" + std::to_string(b), Preprocess(Instance(Load(network), k, b, network))});
    }
  };
  add_public("karate", 2, {1, 2, 3});
  add_public("dolphins", 3, {1, 2});
  for (int k : {2, 3, 4, 6}) add_public("lesmis", k, {1, 2, 3, 4});
  for (int k : {7, 8}) add_public("football", k, {1, 2, 3});
  std::mt19937_64 rng(FixtureSeed() + 4);
  for (int i = 0; list.size() < 100 && i < 1000; ++i) {
    const int n = 6 + static_cast<int>(rng() % 25);
    const int k = 2 + static_cast<int>(rng() % 3);
    Instance inst = Preprocess(Instance(RandomGraph(n, 0.25 + 0.3 * (rng() % 100) / 100.0, rng), k, 1 + static_cast<int>(rng() % 3)));
    if (static_cast<int>(inst.n()) <= inst.b) continue;
    list.push_back({"random#" + std::to_string(i), std::move(inst)});
  }

  const auto start = Clock::now();
  int agreed = 0, eligible = 0;
  for (const Named& item : list) {
    if (BinomialCapped(item.inst.n(), item.inst.b) > 1'000'000) continue;
    ++eligible;
    SolverConfig cfg;
    std::vector<int> values;
    for (Method m : {Method::kBrute, Method::kBranchAndBound, Method::kCuttingPlane}) {
      cfg.method = m;
      const SolverResult r = Solve(item.inst, cfg);
      values.push_back(r.status == SolveStatus::kOptimal ? r.best_value : -1);
    }
    if (values[0] == values[1] && values[1] == values[2] && values[0] >= 0) {
      ++agreed;
    } else {
      o.Fail(item.label + ": " + std::to_string(values[0]) + "/" + std::to_string(values[1]) + "/" + std::to_string(values[2]));
    }
  }
  const double t = Since(start);
  if (t >= 600.0) o.Fail("runtime " + std::to_string(t) + " s");
  std::ostringstream s;
  s << agreed << "/" << eligible << " instances with identical brute/bnb/cutting-plane optima, " << t << " s";
  Report(4, "oracle equivalence", o, s.str());
}

// ---------------------------------------------------------------------------

std::vector<Instance> SmallRandom(int count, int max_n, std::uint64_t salt) {
  std::mt19937_64 rng(FixtureSeed() + salt);
  std::vector<Instance> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = 8 + static_cast<int>(rng() % (max_n - 7));
    const double p = 0.2 + 0.35 * (rng() % 100) / 100.0;
    const int k = 2 + static_cast<int>(rng() % 2);
    const int b = 1 + static_cast<int>(rng() % 3);
    Instance inst = Preprocess(Instance(RandomGraph(n, p, rng), k, b));
    if (static_cast<int>(inst.n()) <= b + 1) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

// Every b-subset of the instance with its surviving core size.
std::vector<std::pair<NodeSet, int>> AllInterdictions(const Instance& inst) {
  std::vector<std::pair<NodeSet, int>> out;
  ForEachSubset(static_cast<int>(inst.n()), inst.b, [&](const std::vector<NodeId>& w) {
    out.emplace_back(NodeSet::FromIds(inst.n(), w), Survivors(inst, w));
  });
  return out;
}

void CutValidity(const std::vector<Instance>& instances) {
  Outcome o;
  std::array<std::size_t, kNumCutKinds> emitted{}, violated{};
  int dom_sym_ok = 0, follower_ok = 0, follower_instances = 0;
  std::mt19937_64 rng(FixtureSeed() + 5);
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const Instance& inst = instances[idx];
    const int n = static_cast<int>(inst.n());
    const int m = LowerBoundM(inst).m;
    const auto omega = AllInterdictions(inst);
    int optimum = n + 1;
    for (const auto& [w, z] : omega) optimum = std::min(optimum, z);

    std::vector<Cut> cuts;
    auto try_add = [&](const std::function<Cut()>& make) {
      try {
        cuts.push_back(make());
      } catch (const std::invalid_argument&) {
      }
    };
    const NodeSet all = NodeSet::Full(n);
    std::vector<NodeSet> bases = {all};
    for (NodeId v = 0; v < n; ++v) {
      NodeSet s = all;
      s.erase(v);
      bases.push_back(s);
    }
    for (const NodeSet& alive : bases) {
      for (int h = inst.k; h <= inst.k + 3; ++h) {
        const NodeSet core = PeelToCore(inst.graph, alive, h);
        if (core.empty()) continue;
        if (h == inst.k) try_add([&] { return BigMCut(inst, core, m); });
        if (h > inst.k) try_add([&] { return HCoreCut(inst, core, h, m); });
      }
    }
    for (int j = 0; j < 40; ++j) try_add([&] { return NoGoodCut(inst, omega[rng() % omega.size()].first, m); });
    const bool followers = FollowerAssumptionHolds(inst);
    const FollowersTable table = ComputeFollowersTable(inst);
    std::vector<Cut> follower_cuts;
    if (followers) {
      follower_cuts = FollowerCuts(inst, table).cuts;
      for (int size = 1; size < inst.b; ++size) {
        ForEachSubset(n, size, [&](const std::vector<NodeId>& s) {
          try_add([&] { return GeneralFollowerCut(inst, NodeSet::FromIds(n, s)); });
        });
      }
    }
    cuts.insert(cuts.end(), follower_cuts.begin(), follower_cuts.end());

    for (const Cut& cut : cuts) {
      const int kind = static_cast<int>(cut.kind);
      ++emitted[kind];
      for (const auto& [w, z] : omega) {
        if (!cut.Evaluate(w, z)) {
          ++violated[kind];
          break;
        }
      }
    }

    // Restricted enumerations must keep the optimum.
    std::vector<Cut> dom_sym = DominanceCuts(table);
    for (Cut& c : SymmetryCuts(table)) dom_sym.push_back(std::move(c));
    auto restricted_best = [&](const std::vector<Cut>& restriction) {
      int best = n + 1;
      for (const auto& [w, z] : omega) {
        bool keep = true;
        for (const Cut& c : restriction) keep = keep && c.Evaluate(w, z);
        if (keep) best = std::min(best, z);
      }
      return best;
    };
    if (restricted_best(dom_sym) == optimum) {
      ++dom_sym_ok;
    } else {
      o.Fail("instance " + std::to_string(idx) + ": dominance+symmetry lose the optimum");
    }
    if (followers) {
      ++follower_instances;
      if (restricted_best(follower_cuts) == optimum) {
        ++follower_ok;
      } else {
        o.Fail("instance " + std::to_string(idx) + ": follower cuts lose the optimum");
      }
    }
  }
  std::ostringstream s;
  s << instances.size() << " graphs; cuts emitted/violated by some W:";
  for (CutKind kind : {CutKind::kBigM, CutKind::kNoGood, CutKind::kHCore, CutKind::kFollower, CutKind::kGeneralFollower}) {
    const int k = static_cast<int>(kind);
    s << " " << CutKindName(kind) << " " << emitted[k] << "/" << violated[k];
    if (violated[k] > 0) {
      o.Fail(std::string(CutKindName(kind)) + ": " + std::to_string(violated[k]) + " of " + std::to_string(emitted[k]) +
             " cuts are violated by some W in Omega");
    }
  }
  s << "; optimum kept by dominance+symmetry " << dom_sym_ok << "/" << instances.size() << ", by follower cuts "
    << follower_ok << "/" << follower_instances;
  Report(5, "cut validity by enumeration", o, s.str());
}

// ---------------------------------------------------------------------------

void BoundValidity(const std::vector<Instance>& instances) {
  Outcome o;
  int checked = 0;
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const Instance& inst = instances[idx];
    const int optimum = NaiveOptimum(inst.graph, inst.k, inst.b);
    const int m = LowerBoundM(inst).m;
    const int greedy = GreedyUpperBound(inst).value;
    if (m > optimum || greedy < optimum) {
      o.Fail("instance " + std::to_string(idx) + ": m=" + std::to_string(m) + " opt=" + std::to_string(optimum) +
             " greedy=" + std::to_string(greedy));
    }
    ++checked;
  }
  int cliques = 0;
  for (int k = 1; k <= 4; ++k) {
    for (int b = 1; b <= 3; ++b) {
      for (int c = 1; c <= 3; ++c) {
        const int size = k + b + c;
        const Instance inst(Clique(size), k, b);
        const int optimum = NaiveOptimum(inst.graph, k, b);
        const int m = LowerBoundM(inst).m;
        if (m != optimum || optimum != size - b) {
          o.Fail("K" + std::to_string(size) + " k=" + std::to_string(k) + " b=" + std::to_string(b) + ": m=" +
                 std::to_string(m) + " opt=" + std::to_string(optimum));
        }
        ++cliques;
      }
    }
  }
  std::ostringstream s;
  s << "m <= opt <= greedy on " << checked << " enumerated instances, m = opt = |K| - b on " << cliques << " cliques";
  Report(6, "bound validity", o, s.str());
}

// ---------------------------------------------------------------------------

void ModelCrossCheck(const std::vector<Instance>& instances) {
  Outcome o;
  int optimal_sets = 0, instances_checked = 0, round_trips = 0;
  std::vector<Instance> list = instances;
  for (int b = 1; b <= 2; ++b) list.push_back(Preprocess(Instance(Load("karate"), 2, b, "karate")));
  for (std::size_t idx = 0; idx < list.size(); ++idx) {
    const Instance& inst = list[idx];
    const ModelIR td = EmitTimeDependent(inst);
    const int horizon = static_cast<int>(inst.n()) - inst.b - LowerBoundM(inst).m;
    const auto omega = AllInterdictions(inst);
    int optimum = static_cast<int>(inst.n()) + 1;
    for (const auto& [w, z] : omega) optimum = std::min(optimum, z);
    double smallest = 1e300;
    for (const auto& [w, z] : omega) {
      const ModelCheck check = EvaluateModel(td, CascadeToAssignment(inst, w, horizon));
      if (!check.feasible) {
        o.Fail("instance " + std::to_string(idx) + ": cascade assignment infeasible (" + check.violations.front() + ")");
        continue;
      }
      smallest = std::min(smallest, check.objective);
      if (z == optimum) {
        ++optimal_sets;
        if (check.objective != optimum) o.Fail("instance " + std::to_string(idx) + ": objective differs from optimum");
      }
    }
    if (smallest < optimum) o.Fail("instance " + std::to_string(idx) + ": an assignment beats the optimum");
    ++instances_checked;

    const std::vector<ModelIR> models = {
        td,
        EmitTimeDependent(inst, {.with_cuts = true}),
        EmitSparseMaster(inst, CutPool()),
        EmitNonlinearDual(inst, {.linearize = true}),
        EmitDetectionLp(inst.graph, inst.k, omega.front().first),
    };
    for (const ModelIR& ir : models) {
      const std::string text = WriteLpText(ir);
      if (WriteLpText(ParseLpText(text)) != text) {
        o.Fail("instance " + std::to_string(idx) + ": " + ir.name + " does not round-trip");
      } else {
        ++round_trips;
      }
    }
  }
  std::ostringstream s;
  s << instances_checked << " instances, " << optimal_sets << " optimal W feasible with objective = optimum, "
    << round_trips << " LP files round-trip byte-identically";
  Report(7, "model cross-check", o, s.str());
}

// ---------------------------------------------------------------------------

void NonReproducibleDeclared() {
  Outcome o;
  BenchManifest manifest;
  manifest.time_limit = 60.0;
  manifest.threads = 2;
  for (const char* network : {"karate", "lesmis", "football"}) {
    const int k = std::string(network) == "football" ? 8 : std::string(network) == "lesmis" ? 6 : 2;
    for (int b : {1, 2}) {
      for (Method m : {Method::kBranchAndBound, Method::kCuttingPlane}) {
        manifest.entries.push_back({network, DataPath(std::string(network) + ".txt"), k, b, m});
      }
    }
  }
  const std::vector<RunReport> rows = RunBench(manifest, {});
  int optimal = 0;
  for (const RunReport& r : rows) {
    optimal += r.status == "optimal";
    if (r.status == "error") o.Fail(r.instance + ": " + r.error);
    const std::string row = CsvRow(r);
    if (std::count(row.begin(), row.end(), ',') != 9) o.Fail("malformed CSV row for " + r.instance);
  }
  const std::string footer = CsvFooter(rows);
  if (footer.rfind("# summary: opt=" + std::to_string(optimal) + ",", 0) != 0) o.Fail("footer: " + footer);
  std::ostringstream s;
  s << "commercial-solver tables over 136 instances with two-hour limits are not reproduced; substitutes are "
       "criteria 2-7 plus a benchmark CSV of "
    << rows.size() << " rows (" << footer << ")";
  Report(8, "non-reproducible content declared", o, s.str());
}

}  // namespace

int main() {
  const auto start = Clock::now();
  PreprocessingReproduction();
  IntegralityAndDuality(LpCases());
  OracleEquivalence();
  const std::vector<Instance> small = SmallRandom(50, 20, 5);
  CutValidity(small);
  BoundValidity(small);
  ModelCrossCheck(SmallRandom(25, 12, 7));
  NonReproducibleDeclared();
  std::printf("acceptance: %d of 8 criteria failed, %.1f s\n", failures, Since(start));
  return failures == 0 ? 0 : 1;
}
