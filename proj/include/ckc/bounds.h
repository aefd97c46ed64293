// Combinatorial lower bound from the (k+b)-core and a greedy incumbent.

#ifndef CKC_BOUNDS_H_
#define CKC_BOUNDS_H_

#include <cstddef>

#include "ckc/cascade.h"

namespace ckc {

struct BoundInfo {
  // Lower bound on the surviving core size: max(0, |(k+b)-core| - b).
  int m = 0;
  // Degree threshold of the core that yields m, h = k + b.
  int h = 0;
  int hcore_size = 0;
  // Horizon for the time-indexed model: n - b - m.
  int tightened_T = 0;
};

// Any b removals leave every node of the (k+b)-core with at least k of its
// neighbours, so at least |(k+b)-core| - b nodes survive.
BoundInfo LowerBoundM(const Instance& inst);
// Same bound for the residual problem G[alive] with budget `budget`.
int LowerBoundOn(const Graph& g, const NodeSet& alive, int k, int budget);

struct GreedyResult {
  NodeSet removed;
  int value = 0;
};

// b picks of the node with the largest residual follower set, lowest id on
// ties, re-peeling after every pick. Once the core is empty the remaining
// picks are the lowest unused ids.
GreedyResult GreedyUpperBound(const Instance& inst);
// Greedy run with an explicit budget on the same instance.
GreedyResult GreedyUpperBound(const Instance& inst, int budget);

}  // namespace ckc

#endif  // CKC_BOUNDS_H_
