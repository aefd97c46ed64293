#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "ckc/cascade.h"
#include "doctest.h"
#include "fixtures.h"
#include "json.hpp"

using namespace ckc;
using namespace ckc::testing;

namespace {

NodeSet Set(std::size_t n, std::vector<NodeId> ids) { return NodeSet::FromIds(n, ids); }

Instance Karate2() {
  return Preprocess(Instance(ReadEdgeListFile(DataPath("karate.txt")), 2, 0, "karate"));
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(Instance(Clique(3), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Instance(Clique(3), 2, -1), std::invalid_argument);
  CHECK(Instance(Clique(4), 3, 1).IsPreprocessed());
  CHECK_FALSE(Instance(Path(4), 2, 1).IsPreprocessed());
}

TEST_CASE("collapse of a clique") {
  for (int k = 1; k <= 5; ++k) {
    SUBCASE("K_{k+1} collapses fully") {
      const Instance inst(Clique(k + 1), k, 1);
      const auto trace = Collapse(inst, Set(k + 1, {0}));
      CHECK(trace.survivors.empty());
      CHECK(trace.rounds == 1);
      CHECK(trace.LeavingAt(0) == std::vector<NodeId>{0});
      CHECK(trace.LeavingAt(1).size() == static_cast<std::size_t>(k));
    }
    SUBCASE("K_{k+2} keeps the other k+1 nodes") {
      const Instance inst(Clique(k + 2), k, 1);
      const auto trace = Collapse(inst, Set(k + 2, {k}));
      CHECK(trace.survivors.size() == static_cast<std::size_t>(k + 1));
      CHECK(trace.rounds == 0);
    }
  }
}

TEST_CASE("empty interdiction leaves the k-core") {
  std::mt19937_64 rng(FixtureSeed());
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = RandomGraph(30, 0.15, rng);
    const Instance inst(g, 3, 0);
    CHECK(Collapse(inst, NodeSet(30)).survivors == KCore(g, 3));
  }
}

TEST_CASE("synchronous rounds on a path-like chain") {
  // Chain 0-1-2-3-4 attached to a K4 on {4,5,6,7}; k = 2 keeps the chain
  // only through its cycle. Removing 5 leaves a tree, which collapses
  // from its leaves inwards.
  const Graph g = FromEdges(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7}, {0, 7}});
  const Instance inst(g, 2, 1);
  REQUIRE(inst.IsPreprocessed());
  const auto trace = Collapse(inst, Set(8, {5}));
  // After removing 5 the cycle 0-1-2-3-4-7(-0) plus 6 attached to 4 and 7 stays.
  CHECK(trace.survivors.size() == 7);
  const auto trace2 = Collapse(inst, Set(8, {7}));
  // Without 7: 0 has degree 1, then 1, then 2, then 3 in successive rounds.
  CHECK(trace2.LeavingAt(1) == std::vector<NodeId>{0});
  CHECK(trace2.LeavingAt(2) == std::vector<NodeId>{1});
  CHECK(trace2.LeavingAt(3) == std::vector<NodeId>{2});
  CHECK(trace2.LeavingAt(4) == std::vector<NodeId>{3});
  CHECK(trace2.rounds == 4);
  CHECK(trace2.survivors.ToVector() == std::vector<NodeId>{4, 5, 6});
  const auto j = nlohmann::json::parse(trace2.ToJson());
  CHECK(j["interdicted"] == nlohmann::json::array({7}));
  CHECK(j["rounds"].size() == 4);
  CHECK(j["survivors"] == nlohmann::json::array({4, 5, 6}));
}

TEST_CASE("cascade trace invariants on random graphs") {
  std::mt19937_64 rng(FixtureSeed() + 3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 15 + trial % 20;
    const int k = 2 + trial % 3;
    const Graph g = RandomGraph(n, 0.25, rng);
    const Instance inst(g, k, 3);
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(3);
    const NodeSet w = NodeSet::FromIds(n, ids);
    const auto trace = Collapse(inst, w);
    // Removed-at-0 set is w.
    auto at0 = trace.LeavingAt(0);
    std::sort(ids.begin(), ids.end());
    CHECK(at0 == ids);
    CHECK(trace.rounds <= n - 3);
    // Survivors equal the reference core of G \ W.
    CHECK(static_cast<int>(trace.survivors.size()) == NaiveSurvivors(g, ids, k));
    // Round semantics replayed directly.
    for (int t = 1; t <= trace.rounds; ++t) {
      for (NodeId v = 0; v < n; ++v) {
        const bool present_before = !trace.removed_at[v] || *trace.removed_at[v] >= t;
        if (!present_before) continue;
        int d = 0;
        for (NodeId u : g.neighbors(v)) d += !trace.removed_at[u] || *trace.removed_at[u] >= t;
        const bool leaves_now = trace.removed_at[v] && *trace.removed_at[v] == t;
        CHECK(leaves_now == (d < k));
      }
    }
    // Monotone in w.
    NodeSet bigger = w;
    bigger.insert(static_cast<NodeId>((ids.back() + 1) % n));
    CHECK(Collapse(inst, bigger).survivors.IsSubsetOf(trace.survivors));
  }
}

TEST_CASE("followers") {
  for (int k = 2; k <= 4; ++k) {
    const Instance big(Clique(k + 2), k, 1);
    const Instance tight(Clique(k + 1), k, 1);
    for (NodeId u = 0; u < k + 1; ++u) {
      CHECK(Followers(big, u).ToVector() == std::vector<NodeId>{u});
      CHECK(Followers(tight, u).size() == static_cast<std::size_t>(k + 1));
    }
    const Instance wide(Clique(k + 3), k, 2);
    CHECK(FollowersOfSet(wide, Set(k + 3, {0, 2})).ToVector() == std::vector<NodeId>({0, 2}));
  }
  const Instance raw(FromEdges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}), 2, 1);
  CHECK(FollowersOfSet(raw, NodeSet(4)).ToVector() == std::vector<NodeId>{3});
  CHECK(FollowersOfSet(raw, Set(4, {1})) == Followers(raw, 1));
}

TEST_CASE("followers table requires preprocessing") {
  const Instance raw(FromEdges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}), 2, 1);
  CHECK_THROWS_AS(ComputeFollowersTable(raw), std::invalid_argument);
  const auto table = ComputeFollowersTable(Instance(Clique(5), 3, 1));
  for (NodeId u = 0; u < 5; ++u) CHECK(table[u].ToVector() == std::vector<NodeId>{u});
}

TEST_CASE("karate followers match re-peeling") {
  const Instance inst = Karate2();
  REQUIRE(inst.n() == 33);
  const auto table = ComputeFollowersTable(inst);
  for (NodeId u = 0; u < 33; ++u) {
    std::vector<bool> alive(33, true);
    alive[u] = false;
    const auto core = NaiveCore(inst.graph, alive, 2);
    for (NodeId v = 0; v < 33; ++v) CHECK(table[u].contains(v) == !core[v]);
    CHECK(table[u].contains(u));
    // Removing J_u has the same effect as removing u.
    CHECK(Collapse(inst, table[u]).survivors == Collapse(inst, Set(33, {u})).survivors);
  }
}

TEST_CASE("preprocess keeps labels") {
  const Instance inst = Preprocess(Instance(FromEdges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}}), 2, 1, "t"));
  CHECK(inst.n() == 3);
  CHECK(inst.graph.label(2) == "2");
  CHECK(inst.name == "t");
  CHECK(inst.IsPreprocessed());
}

TEST_CASE("instance descriptor resolves relative paths") {
  const auto dir = std::filesystem::temp_directory_path() / "ckc_descriptor_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "inst.json") << R"({"graph_path": "g.txt", "k": 3, "b": 2, "name": "toy"})";
  }
  const auto d = ReadInstanceDescriptor((dir / "inst.json").string());
  CHECK(d.k == 3);
  CHECK(d.b == 2);
  CHECK(d.name == "toy");
  CHECK(d.graph_path == (dir / "g.txt").lexically_normal().string());
  {
    std::ofstream(dir / "bad.json") << R"({"k": 3})";
  }
  CHECK_THROWS_AS(ReadInstanceDescriptor((dir / "bad.json").string()), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("peeler matches the free function") {
  std::mt19937_64 rng(FixtureSeed() + 4);
  const Graph g = RandomGraph(40, 0.2, rng);
  Peeler peeler(g, 3);
  std::bernoulli_distribution coin(0.8);
  for (int trial = 0; trial < 30; ++trial) {
    NodeSet alive(40);
    for (NodeId v = 0; v < 40; ++v)
      if (coin(rng)) alive.insert(v);
    CHECK(peeler.Core(alive) == PeelToCore(g, alive, 3));
    const std::vector<NodeId> removed{static_cast<NodeId>(trial % 40)};
    NodeSet minus = alive;
    minus.erase(removed[0]);
    CHECK(peeler.CoreSizeWithout(alive, removed) == PeelToCore(g, minus, 3).size());
  }
}
