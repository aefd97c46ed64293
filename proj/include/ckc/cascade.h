// Deletion cascades after interdicting a node set, and follower sets.

#ifndef CKC_CASCADE_H_
#define CKC_CASCADE_H_

#include <optional>
#include <string>
#include <vector>

#include "ckc/graph.h"

namespace ckc {

// A Collapsed k-Core instance: remove exactly `b` nodes of `graph` so that
// the k-core of what remains is as small as possible.
struct Instance {
  Graph graph;
  int k = 1;
  int b = 0;
  std::string name;

  Instance() = default;
  Instance(Graph g, int k_, int b_, std::string name_ = {});

  std::size_t n() const { return graph.num_nodes(); }
  // True when the graph is its own k-core.
  bool IsPreprocessed() const;
};

// Restricts the instance to the k-core of its graph. Node labels survive.
Instance Preprocess(const Instance& inst);

// {graph_path, k, b, name}; a relative graph_path is resolved against the
// directory of the descriptor.
struct InstanceDescriptor {
  std::string graph_path;
  int k = 1;
  int b = 0;
  std::string name;
};
InstanceDescriptor ReadInstanceDescriptor(const std::string& path);

struct CascadeTrace {
  // 0 = interdicted, t >= 1 = left at round t, nullopt = survives.
  std::vector<std::optional<int>> removed_at;
  int rounds = 0;
  NodeSet survivors;

  // Nodes leaving at round t (t = 0 gives the interdicted set).
  std::vector<NodeId> LeavingAt(int t) const;
  // {interdicted:[...], rounds:[[t=1],[t=2],...], survivors:[...]}
  std::string ToJson() const;
};

// Synchronous rounds: every node whose degree among the nodes still present
// after round t-1 is below k leaves at round t.
CascadeTrace Collapse(const Instance& inst, const NodeSet& interdicted);

// J_u = V \ C_k(G \ {u}).
NodeSet Followers(const Instance& inst, NodeId u);
// J_S = V \ C_k(G \ S).
NodeSet FollowersOfSet(const Instance& inst, const NodeSet& s);

// One follower set per node. Requires a preprocessed instance.
using FollowersTable = std::vector<NodeSet>;
FollowersTable ComputeFollowersTable(const Instance& inst);

// Repeated peeling on one graph with reusable scratch buffers. Not thread-safe;
// use one per thread.
class Peeler {
 public:
  Peeler(const Graph& g, int k);

  // C_k(G[alive]).
  NodeSet Core(const NodeSet& alive);
  // |C_k(G \ removed)|, evaluated from `base` (a k-core-closed set that
  // contains the result) minus `removed`.
  std::size_t CoreSizeWithout(const NodeSet& base, std::span<const NodeId> removed);

 private:
  const Graph& g_;
  int k_;
  std::vector<int> deg_;
  std::vector<NodeId> stack_;
};

}  // namespace ckc

#endif  // CKC_CASCADE_H_
