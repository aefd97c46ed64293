#include "ckc/bounds.h"

#include <algorithm>
#include <stdexcept>

namespace ckc {

BoundInfo LowerBoundM(const Instance& inst) {
  if (!inst.IsPreprocessed()) throw std::invalid_argument("lower bound requires a preprocessed instance");
  BoundInfo info;
  info.h = inst.k + inst.b;
  info.hcore_size = static_cast<int>(KCore(inst.graph, info.h).size());
  info.m = std::max(0, info.hcore_size - inst.b);
  info.tightened_T = std::max(0, static_cast<int>(inst.n()) - inst.b - info.m);
  return info;
}

int LowerBoundOn(const Graph& g, const NodeSet& alive, int k, int budget) {
  const int core = static_cast<int>(PeelToCore(g, alive, k + budget).size());
  return std::max(0, core - budget);
}

GreedyResult GreedyUpperBound(const Instance& inst) { return GreedyUpperBound(inst, inst.b); }

GreedyResult GreedyUpperBound(const Instance& inst, int budget) {
  if (!inst.IsPreprocessed()) throw std::invalid_argument("greedy requires a preprocessed instance");
  const std::size_t n = inst.n();
  if (budget < 0 || static_cast<std::size_t>(budget) > n) throw std::invalid_argument("budget out of range");
  Peeler peeler(inst.graph, inst.k);
  GreedyResult out{NodeSet(n), 0};
  NodeSet residual = NodeSet::Full(n);
  for (int pick = 0; pick < budget; ++pick) {
    NodeId best = -1;
    std::size_t best_core = 0;
    for (NodeId u : residual.ToVector()) {
      NodeSet trial = residual;
      trial.erase(u);
      const std::size_t core = peeler.Core(trial).size();
      if (best < 0 || core < best_core) {
        best = u;
        best_core = core;
      }
    }
    if (best < 0) {
      for (NodeId v = 0; static_cast<std::size_t>(v) < n && out.removed.size() < static_cast<std::size_t>(budget); ++v) {
        out.removed.insert(v);
      }
      break;
    }
    out.removed.insert(best);
    residual.erase(best);
    residual = peeler.Core(residual);
  }
  out.value = static_cast<int>(residual.size());
  return out;
}

}  // namespace ckc
