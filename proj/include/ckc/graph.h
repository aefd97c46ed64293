// Undirected simple graphs, node sets and k-core decomposition.
//
// Node ids are contiguous in [0, n). Whatever labels the input file used are
// kept on the side for reporting; every algorithm works on ids only.

#ifndef CKC_GRAPH_H_
#define CKC_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ckc {

using NodeId = std::int32_t;

// Dense membership set over the universe [0, n) with a cached cardinality.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : words_((universe + 63) / 64, 0), universe_(universe) {}
  static NodeSet Full(std::size_t universe);
  static NodeSet FromIds(std::size_t universe, std::span<const NodeId> ids);

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(NodeId v) const {
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u;
  }
  // Both return true when membership changed.
  bool insert(NodeId v);
  bool erase(NodeId v);

  // Members in ascending order.
  std::vector<NodeId> ToVector() const;

  bool IsSubsetOf(const NodeSet& other) const;
  std::size_t IntersectionSize(const NodeSet& other) const;
  NodeSet Complement() const;
  NodeSet& operator|=(const NodeSet& other);
  NodeSet& operator&=(const NodeSet& other);
  NodeSet& operator-=(const NodeSet& other);

  std::size_t Hash() const;

  friend bool operator==(const NodeSet& a, const NodeSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void Recount();

  std::vector<std::uint64_t> words_;
  std::size_t universe_ = 0;
  std::size_t count_ = 0;
};

class Graph {
 public:
  Graph() = default;
  // Builds from an edge list over ids [0, n). Self-loops and parallel edges
  // are dropped; see dropped_self_loops() / dropped_duplicates().
  Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
        std::vector<std::string> labels = {});

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  bool HasEdge(NodeId a, NodeId b) const;
  const std::string& label(NodeId v) const { return labels_[v]; }

  // Undirected edges as (i, j) with i < j, sorted.
  std::vector<std::pair<NodeId, NodeId>> Edges() const;

  std::size_t dropped_self_loops() const { return dropped_self_loops_; }
  std::size_t dropped_duplicates() const { return dropped_duplicates_; }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> labels_;
  std::size_t num_edges_ = 0;
  std::size_t dropped_self_loops_ = 0;
  std::size_t dropped_duplicates_ = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseOptions {
  // Lines whose first non-blank character is one of these are skipped.
  std::string comment_prefixes = "#%";
  // 0 means "any run of whitespace".
  char separator = 0;
};

// Reads "label label" lines. Labels are remapped to 0..n-1: ascending numeric
// order when every label is an integer, first-appearance order otherwise.
Graph ParseEdgeList(std::string_view text, const ParseOptions& options = {});
Graph ReadEdgeListFile(const std::string& path, const ParseOptions& options = {});

// The i-th node of the result is the i-th smallest member of `s`; labels are
// carried over from `g`.
Graph InducedSubgraph(const Graph& g, const NodeSet& s);

// k-core of G[alive]: the unique maximal subset of `alive` whose induced
// subgraph has minimum degree >= k. Linear-time peeling.
NodeSet PeelToCore(const Graph& g, NodeSet alive, int k);
NodeSet KCore(const Graph& g, int k);

struct CoreDecomposition {
  std::vector<int> coreness;
  int max_coreness = 0;
  // layers[i] holds the nodes with coreness exactly i, i in [0, max_coreness].
  std::vector<std::vector<NodeId>> layers;

  // Nodes with coreness >= k, i.e. the k-core.
  NodeSet AtLeast(int k) const;
};

// Batagelj-Zaversnik bucket decomposition, O(n + m).
CoreDecomposition DecomposeCores(const Graph& g);

// Throws std::invalid_argument on the empty graph.
std::size_t MinDegree(const Graph& g);
// Minimum degree of G[s]; throws when s is empty.
std::size_t MinDegreeIn(const Graph& g, const NodeSet& s);
// Number of edges of G[s].
std::size_t EdgesWithin(const Graph& g, const NodeSet& s);

}  // namespace ckc

#endif  // CKC_GRAPH_H_
