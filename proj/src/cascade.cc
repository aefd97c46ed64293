#include "ckc/cascade.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ckc {

Instance::Instance(Graph g, int k_, int b_, std::string name_)
    : graph(std::move(g)), k(k_), b(b_), name(std::move(name_)) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (b < 0) throw std::invalid_argument("budget must be nonnegative");
}

bool Instance::IsPreprocessed() const { return KCore(graph, k).size() == graph.num_nodes(); }

Instance Preprocess(const Instance& inst) {
  Instance out;
  out.graph = InducedSubgraph(inst.graph, KCore(inst.graph, inst.k));
  out.k = inst.k;
  out.b = inst.b;
  out.name = inst.name;
  return out;
}

InstanceDescriptor ReadInstanceDescriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path + ": " + e.what());
  }
  InstanceDescriptor d;
  try {
    d.graph_path = j.at("graph_path").get<std::string>();
    d.k = j.at("k").get<int>();
    d.b = j.at("b").get<int>();
    d.name = j.value("name", std::filesystem::path(d.graph_path).stem().string());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path + ": " + e.what());
  }
  const std::filesystem::path gp(d.graph_path);
  if (gp.is_relative()) {
    d.graph_path = (std::filesystem::path(path).parent_path() / gp).lexically_normal().string();
  }
  return d;
}

std::vector<NodeId> CascadeTrace::LeavingAt(int t) const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < removed_at.size(); ++v) {
    if (removed_at[v] && *removed_at[v] == t) out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

std::string CascadeTrace::ToJson() const {
  nlohmann::json j;
  j["interdicted"] = LeavingAt(0);
  auto rounds_json = nlohmann::json::array();
  for (int t = 1; t <= rounds; ++t) rounds_json.push_back(LeavingAt(t));
  j["rounds"] = rounds_json;
  j["survivors"] = survivors.ToVector();
  return j.dump();
}

CascadeTrace Collapse(const Instance& inst, const NodeSet& interdicted) {
  const Graph& g = inst.graph;
  const std::size_t n = g.num_nodes();
  if (interdicted.universe() != n) throw std::out_of_range("interdiction set universe mismatch");
  CascadeTrace trace;
  trace.removed_at.assign(n, std::nullopt);
  NodeSet alive = interdicted.Complement();
  for (NodeId v : interdicted.ToVector()) trace.removed_at[v] = 0;

  std::vector<int> deg(n, 0);
  std::vector<NodeId> frontier;
  for (NodeId v : alive.ToVector()) {
    for (NodeId u : g.neighbors(v)) deg[v] += alive.contains(u);
    if (deg[v] < inst.k) frontier.push_back(v);
  }
  int t = 0;
  while (!frontier.empty()) {
    ++t;
    for (NodeId v : frontier) {
      alive.erase(v);
      trace.removed_at[v] = t;
    }
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      for (NodeId u : g.neighbors(v)) {
        if (!alive.contains(u)) continue;
        // Push exactly once: when the degree first drops below k.
        if (deg[u]-- == inst.k) next.push_back(u);
      }
    }
    frontier = std::move(next);
  }
  trace.rounds = t;
  trace.survivors = std::move(alive);
  return trace;
}

NodeSet FollowersOfSet(const Instance& inst, const NodeSet& s) {
  return PeelToCore(inst.graph, s.Complement(), inst.k).Complement();
}

NodeSet Followers(const Instance& inst, NodeId u) {
  if (u < 0 || static_cast<std::size_t>(u) >= inst.n()) throw std::out_of_range("node id out of range");
  NodeSet s(inst.n());
  s.insert(u);
  return FollowersOfSet(inst, s);
}

FollowersTable ComputeFollowersTable(const Instance& inst) {
  if (!inst.IsPreprocessed()) {
    throw std::invalid_argument("followers table requires a preprocessed instance (graph equal to its k-core)");
  }
  const std::size_t n = inst.n();
  FollowersTable table;
  table.reserve(n);
  Peeler peeler(inst.graph, inst.k);
  NodeSet alive = NodeSet::Full(n);
  for (std::size_t u = 0; u < n; ++u) {
    alive.erase(static_cast<NodeId>(u));
    table.push_back(peeler.Core(alive).Complement());
    alive.insert(static_cast<NodeId>(u));
  }
  return table;
}

Peeler::Peeler(const Graph& g, int k) : g_(g), k_(k), deg_(g.num_nodes(), 0) {
  stack_.reserve(g.num_nodes());
}

NodeSet Peeler::Core(const NodeSet& alive_in) {
  NodeSet alive = alive_in;
  stack_.clear();
  const auto members = alive.ToVector();
  for (NodeId v : members) {
    int d = 0;
    for (NodeId u : g_.neighbors(v)) d += alive.contains(u);
    deg_[v] = d;
    if (d < k_) stack_.push_back(v);
  }
  for (NodeId v : stack_) alive.erase(v);
  while (!stack_.empty()) {
    const NodeId v = stack_.back();
    stack_.pop_back();
    for (NodeId u : g_.neighbors(v)) {
      if (alive.contains(u) && --deg_[u] < k_) {
        alive.erase(u);
        stack_.push_back(u);
      }
    }
  }
  return alive;
}

std::size_t Peeler::CoreSizeWithout(const NodeSet& base, std::span<const NodeId> removed) {
  NodeSet alive = base;
  for (NodeId v : removed) alive.erase(v);
  return Core(alive).size();
}

}  // namespace ckc
