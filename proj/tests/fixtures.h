// Graph builders and independent reference computations shared by the tests.
// Nothing here calls into the library's peeling code.

#ifndef CKC_TESTS_FIXTURES_H_
#define CKC_TESTS_FIXTURES_H_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ckc/graph.h"

namespace ckc::testing {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

inline Graph Clique(int n) {
  EdgeList e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

inline Graph Path(int n) {
  EdgeList e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph Star(int leaves) {
  EdgeList e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

inline Graph FromEdges(int n, EdgeList e) { return Graph(n, e); }

// Seed for randomized fixtures; COLLAPSE_CORE_SEED overrides the default.
inline std::uint64_t FixtureSeed(std::uint64_t fallback = 20240611) {
  if (const char* s = std::getenv("COLLAPSE_CORE_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

inline Graph RandomGraph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  EdgeList e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph(n, e);
}

// Reference k-core: repeatedly scan for any alive node below degree k,
// using an adjacency matrix.
inline std::vector<bool> NaiveCore(const Graph& g, std::vector<bool> alive, int k) {
  const int n = static_cast<int>(g.num_nodes());
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [a, b] : g.Edges()) adj[a][b] = adj[b][a] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      int d = 0;
      for (int u = 0; u < n; ++u) d += alive[u] && adj[v][u];
      if (d < k) {
        alive[v] = false;
        changed = true;
      }
    }
  }
  return alive;
}

inline int NaiveSurvivors(const Graph& g, const std::vector<NodeId>& removed, int k) {
  std::vector<bool> alive(g.num_nodes(), true);
  for (NodeId v : removed) alive[v] = false;
  int count = 0;
  for (bool a : NaiveCore(g, alive, k)) count += a;
  return count;
}

// Calls fn on every size-r subset of [0, n) in lexicographic order.
inline void ForEachSubset(int n, int r, const std::function<void(const std::vector<NodeId>&)>& fn) {
  std::vector<NodeId> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  if (r > n) return;
  while (true) {
    fn(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Exhaustive optimum of the collapsed k-core problem via the naive core.
inline int NaiveOptimum(const Graph& g, int k, int b) {
  int best = static_cast<int>(g.num_nodes()) + 1;
  ForEachSubset(static_cast<int>(g.num_nodes()), b,
                [&](const std::vector<NodeId>& w) { best = std::min(best, NaiveSurvivors(g, w, k)); });
  return best;
}

inline std::string DataPath(const std::string& name) { return std::string(CKC_DATA_DIR) + "/" + name; }

}  // namespace ckc::testing

#endif  // CKC_TESTS_FIXTURES_H_
