#include <random>

#include "ckc/bounds.h"
#include "ckc/solver.h"
#include "doctest.h"
#include "fixtures.h"
#include "json.hpp"

using namespace ckc;
using namespace ckc::testing;

namespace {

SolverConfig With(Method method) {
  SolverConfig cfg;
  cfg.method = method;
  return cfg;
}

Instance Karate(int b) {
  return Preprocess(Instance(ReadEdgeListFile(DataPath("karate.txt")), 2, b, "karate"));
}

void CheckCertificate(const Instance& inst, const SolverResult& r) {
  CHECK(static_cast<int>(r.best_w.size()) == inst.b);
  CHECK(r.proven_lb <= r.best_value);
  CHECK(static_cast<int>(Collapse(inst, r.best_w).survivors.size()) == r.best_value);
  if (r.status == SolveStatus::kOptimal) CHECK(r.proven_lb == r.best_value);
}

}  // namespace

TEST_CASE("brute force examples") {
  for (int k = 2; k <= 4; ++k) {
    const auto r = BruteForce(Instance(Clique(k + 1), k, 1));
    CHECK(r.best_value == 0);
    CHECK(r.best_w.ToVector() == std::vector<NodeId>{0});
    CHECK(r.status == SolveStatus::kOptimal);
  }
  CHECK(BruteForce(Instance(Clique(6), 3, 1)).best_value == 5);
}

TEST_CASE("brute force refuses oversized enumerations") {
  SolverConfig cfg;
  cfg.brute_force_cap = 10;
  CHECK_THROWS_AS(BruteForce(Instance(Clique(8), 3, 2), cfg), std::length_error);
  CHECK(BinomialCapped(33, 3) == 5456);
  CHECK(BinomialCapped(5, 7) == 0);
  CHECK(BinomialCapped(200, 100) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("infeasible budget") {
  for (Method method : {Method::kBrute, Method::kBranchAndBound, Method::kCuttingPlane}) {
    const auto r = Solve(Instance(Clique(4), 3, 5), With(method));
    CHECK(r.status == SolveStatus::kInfeasible);
  }
  CHECK_THROWS_AS(Solve(Instance(Path(4), 2, 1), With(Method::kBranchAndBound)), std::invalid_argument);
}

TEST_CASE("karate optima agree with the reference enumeration") {
  // Values frozen from the reference enumeration below.
  const int expected[] = {0, 25, 20, 15};
  for (int b = 1; b <= 3; ++b) {
    const Instance inst = Karate(b);
    CHECK(NaiveOptimum(inst.graph, 2, b) == expected[b]);
    for (Method method : {Method::kBrute, Method::kBranchAndBound, Method::kCuttingPlane}) {
      const auto r = Solve(inst, With(method));
      CAPTURE(MethodName(method));
      CAPTURE(b);
      CHECK(r.best_value == expected[b]);
      CHECK(r.status == SolveStatus::kOptimal);
      CheckCertificate(inst, r);
    }
  }
}

TEST_CASE("clique bound closes the root") {
  const auto r = BranchAndBound(Instance(Clique(10), 3, 2));
  CHECK(r.best_value == 8);
  CHECK(r.proven_lb == 8);
  CHECK(r.nodes_explored == 0);
  CHECK(r.status == SolveStatus::kOptimal);
}

TEST_CASE("dominance and symmetry never change the optimum") {
  std::mt19937_64 rng(FixtureSeed() + 30);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = Preprocess(Instance(RandomGraph(22 + trial % 10, 0.25, rng), 2 + trial % 2, 1 + trial % 3));
    if (static_cast<int>(inst.n()) < inst.b) continue;
    SolverConfig on, off;
    off.use_dominance = off.use_symmetry = false;
    on.use_followers = off.use_followers = false;
    const auto a = BranchAndBound(inst, on);
    const auto b = BranchAndBound(inst, off);
    CHECK(a.best_value == b.best_value);
    CHECK(a.nodes_explored <= b.nodes_explored);
  }
}

TEST_CASE("cutting plane on K_{k+2}") {
  for (int k = 2; k <= 4; ++k) {
    const Instance inst(Clique(k + 2), k, 1);
    const auto r = CuttingPlane(inst);
    CHECK(r.best_value == k + 1);
    CHECK(r.status == SolveStatus::kOptimal);
    CHECK(r.master_values.size() <= 2);
  }
}

TEST_CASE("redundant collapsers are cut off by the follower separation") {
  // Hanging cycle: K4 on {0,1,2,3} closed through 3-4-5-0, plus a K5 on
  // {6..10} so that no single removal empties the network. Removing 3
  // drops 4 and 5, so any master point {3,4} is redundant.
  EdgeList e{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 0}};
  for (int i = 6; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) e.emplace_back(i, j);
  const Instance inst(FromEdges(11, e), 2, 2);
  REQUIRE(FollowerAssumptionHolds(inst));
  const NodeSet w = NodeSet::FromIds(11, std::vector<NodeId>{3, 4});
  NodeSet s(11);
  s.insert(3);
  REQUIRE(FollowersOfSet(inst, s).contains(4));
  const Cut cut = GeneralFollowerCut(inst, s);
  CHECK_FALSE(cut.Evaluate(w, 0));
  const auto r = CuttingPlane(inst);
  CHECK(r.best_value == NaiveOptimum(inst.graph, 2, 2));
  CHECK(r.status == SolveStatus::kOptimal);
}

TEST_CASE("methods agree on random instances") {
  std::mt19937_64 rng(FixtureSeed() + 31);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 12 + trial % 16;
    const int k = 2 + trial % 3;
    const int b = 1 + trial % 4;
    const Instance inst = Preprocess(Instance(RandomGraph(n, 0.2 + 0.01 * (trial % 20), rng), k, b));
    if (static_cast<int>(inst.n()) < b) continue;
    const int opt = NaiveOptimum(inst.graph, k, b);
    for (Method method : {Method::kBrute, Method::kBranchAndBound, Method::kCuttingPlane}) {
      const auto r = Solve(inst, With(method));
      CAPTURE(MethodName(method));
      CAPTURE(trial);
      CHECK(r.best_value == opt);
      CheckCertificate(inst, r);
    }
    auto cfg = With(Method::kCuttingPlane);
    cfg.use_followers = false;
    cfg.u_threshold = 0;
    cfg.ell_offset = 0;
    CHECK(CuttingPlane(inst, cfg).best_value == opt);
  }
}

TEST_CASE("master value never decreases") {
  std::mt19937_64 rng(FixtureSeed() + 32);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = Preprocess(Instance(RandomGraph(25, 0.25, rng), 2, 2 + trial % 2));
    if (static_cast<int>(inst.n()) < inst.b) continue;
    const auto r = CuttingPlane(inst);
    for (std::size_t t = 1; t < r.master_values.size(); ++t) CHECK(r.master_values[t - 1] <= r.master_values[t]);
    for (int v : r.master_values) CHECK(v <= r.best_value);
    std::size_t total = 0;
    for (auto c : r.cuts_added) total += c;
    CHECK(total + 1 >= r.master_values.size());
  }
}

TEST_CASE("time limit yields a feasible answer with a valid bound") {
  const Instance inst = Karate(3);
  const int m = LowerBoundM(inst).m;
  for (Method method : {Method::kBrute, Method::kBranchAndBound, Method::kCuttingPlane}) {
    SolverConfig cfg = With(method);
    cfg.time_limit = 1e-9;
    const auto r = Solve(inst, cfg);
    CAPTURE(MethodName(method));
    CHECK(r.status == SolveStatus::kFeasible);
    CHECK(r.proven_lb >= m);
    CHECK(r.proven_lb <= r.best_value);
    CHECK(static_cast<int>(r.best_w.size()) == 3);
  }
}

TEST_CASE("result json") {
  const Instance inst = Karate(1);
  const auto r = BranchAndBound(inst);
  const auto j = nlohmann::json::parse(r.ToJson(inst.graph));
  CHECK(j["value"] == r.best_value);
  CHECK(j["lb"] == r.proven_lb);
  CHECK(j["status"] == "optimal");
  CHECK(j["set"].size() == 1);
  CHECK(j["cuts"].contains("bigm"));
  CHECK(j["time"].is_number());
  CHECK(ParseMethod("cutting-plane") == Method::kCuttingPlane);
  CHECK_THROWS_AS(ParseMethod("simplex"), std::invalid_argument);
}

TEST_CASE("follower assumption") {
  CHECK_FALSE(FollowerAssumptionHolds(Instance(Clique(4), 3, 2)));
  CHECK(FollowerAssumptionHolds(Instance(Clique(6), 3, 2)));
  CHECK(FollowerAssumptionHolds(Instance(Clique(4), 3, 1)));
}
