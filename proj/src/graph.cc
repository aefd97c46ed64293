#include "ckc/graph.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace ckc {

NodeSet NodeSet::Full(std::size_t universe) {
  NodeSet s(universe);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (universe % 64 != 0 && !s.words_.empty()) {
    s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
  }
  s.count_ = universe;
  return s;
}

NodeSet NodeSet::FromIds(std::size_t universe, std::span<const NodeId> ids) {
  NodeSet s(universe);
  for (NodeId v : ids) {
    if (v < 0 || static_cast<std::size_t>(v) >= universe) {
      throw std::out_of_range("node id " + std::to_string(v) + " outside [0, " +
                              std::to_string(universe) + ")");
    }
    s.insert(v);
  }
  return s;
}

bool NodeSet::insert(NodeId v) {
  auto& w = words_[static_cast<std::size_t>(v) >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (v & 63);
  if (w & bit) return false;
  w |= bit;
  ++count_;
  return true;
}

bool NodeSet::erase(NodeId v) {
  auto& w = words_[static_cast<std::size_t>(v) >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (v & 63);
  if (!(w & bit)) return false;
  w &= ~bit;
  --count_;
  return true;
}

std::vector<NodeId> NodeSet::ToVector() const {
  std::vector<NodeId> out;
  out.reserve(count_);
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w) {
      const int b = std::countr_zero(w);
      out.push_back(static_cast<NodeId>(wi * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

bool NodeSet::IsSubsetOf(const NodeSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
    if (words_[i] & ~o) return false;
  }
  return true;
}

std::size_t NodeSet::IntersectionSize(const NodeSet& other) const {
  std::size_t count = 0;
  const std::size_t len = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < len; ++i) count += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
  return count;
}

NodeSet NodeSet::Complement() const {
  NodeSet full = Full(universe_);
  full -= *this;
  return full;
}

NodeSet& NodeSet::operator|=(const NodeSet& other) {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i) words_[i] |= other.words_[i];
  Recount();
  return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  }
  Recount();
  return *this;
}

NodeSet& NodeSet::operator-=(const NodeSet& other) {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i) words_[i] &= ~other.words_[i];
  Recount();
  return *this;
}

std::size_t NodeSet::Hash() const {
  // FNV-1a over the words.
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint64_t w : words_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ universe_);
}

void NodeSet::Recount() {
  count_ = 0;
  for (std::uint64_t w : words_) count_ += static_cast<std::size_t>(std::popcount(w));
}

Graph::Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
             std::vector<std::string> labels)
    : adjacency_(n), labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n) throw std::invalid_argument("label count does not match node count");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) {
      throw std::out_of_range("edge endpoint outside [0, n)");
    }
    if (a == b) {
      ++dropped_self_loops_;
      continue;
    }
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  std::size_t total = 0;
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    const auto before = adj.size();
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    dropped_duplicates_ += before - adj.size();
    total += adj.size();
  }
  // Each duplicate edge was counted once from each endpoint.
  dropped_duplicates_ /= 2;
  num_edges_ = total / 2;
}

bool Graph::HasEdge(NodeId a, NodeId b) const {
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<std::pair<NodeId, NodeId>> Graph::Edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(num_edges_);
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    for (NodeId j : adjacency_[i]) {
      if (static_cast<NodeId>(i) < j) out.emplace_back(static_cast<NodeId>(i), j);
    }
  }
  return out;
}

namespace {

bool ParseInteger(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> SplitFields(std::string_view line, char separator) {
  std::vector<std::string_view> fields;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  if (separator == 0) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      fields.push_back(line.substr(i, j - i));
      i = j;
    }
  } else {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(separator, start);
      fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  }
  return fields;
}

}  // namespace

Graph ParseEdgeList(std::string_view text, const ParseOptions& options) {
  std::vector<std::pair<std::string, std::string>> raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (options.comment_prefixes.find(line[first]) != std::string::npos) continue;
    auto fields = SplitFields(line, options.separator);
    // Extra columns (weights, timestamps) are tolerated and ignored.
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(line_no, "expected two node labels, got '" + std::string(line) + "'");
    }
    raw.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  if (raw.empty()) throw ParseError(0, "edge list is empty");

  bool numeric = true;
  for (const auto& [a, b] : raw) {
    long long tmp;
    if (!ParseInteger(a, tmp) || !ParseInteger(b, tmp)) {
      numeric = false;
      break;
    }
  }

  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  if (numeric) {
    std::vector<std::pair<long long, std::string>> values;
    for (const auto& [a, b] : raw) {
      for (const auto* s : {&a, &b}) {
        long long v;
        ParseInteger(*s, v);
        values.emplace_back(v, *s);
      }
    }
    std::sort(values.begin(), values.end());
    // "01" and "1" are the same node.
    std::unordered_map<long long, NodeId> by_value;
    for (const auto& [v, s] : values) {
      auto [it, inserted] = by_value.emplace(v, static_cast<NodeId>(labels.size()));
      if (inserted) labels.push_back(std::to_string(v));
      ids.emplace(s, it->second);
    }
  } else {
    for (const auto& [a, b] : raw) {
      for (const auto* s : {&a, &b}) {
        if (ids.emplace(*s, static_cast<NodeId>(labels.size())).second) labels.push_back(*s);
      }
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) edges.emplace_back(ids.at(a), ids.at(b));
  const std::size_t n = labels.size();
  return Graph(n, edges, std::move(labels));
}

Graph ReadEdgeListFile(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseEdgeList(buf.str(), options);
}

Graph InducedSubgraph(const Graph& g, const NodeSet& s) {
  if (s.universe() != g.num_nodes()) {
    throw std::out_of_range("node set universe does not match the graph");
  }
  const auto members = s.ToVector();
  std::vector<NodeId> new_id(g.num_nodes(), -1);
  std::vector<std::string> labels;
  labels.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    new_id[members[i]] = static_cast<NodeId>(i);
    labels.push_back(g.label(members[i]));
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v : members) {
    for (NodeId u : g.neighbors(v)) {
      if (v < u && new_id[u] >= 0) edges.emplace_back(new_id[v], new_id[u]);
    }
  }
  return Graph(members.size(), edges, std::move(labels));
}

NodeSet PeelToCore(const Graph& g, NodeSet alive, int k) {
  const std::size_t n = g.num_nodes();
  std::vector<int> deg(n, 0);
  std::vector<NodeId> stack;
  for (NodeId v : alive.ToVector()) {
    int d = 0;
    for (NodeId u : g.neighbors(v)) d += alive.contains(u);
    deg[v] = d;
    if (d < k) stack.push_back(v);
  }
  for (NodeId v : stack) alive.erase(v);
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : g.neighbors(v)) {
      if (alive.contains(u) && --deg[u] < k) {
        alive.erase(u);
        stack.push_back(u);
      }
    }
  }
  return alive;
}

NodeSet KCore(const Graph& g, int k) {
  return PeelToCore(g, NodeSet::Full(g.num_nodes()), k);
}

NodeSet CoreDecomposition::AtLeast(int k) const {
  NodeSet s(coreness.size());
  for (std::size_t v = 0; v < coreness.size(); ++v) {
    if (coreness[v] >= k) s.insert(static_cast<NodeId>(v));
  }
  return s;
}

CoreDecomposition DecomposeCores(const Graph& g) {
  const std::size_t n = g.num_nodes();
  CoreDecomposition out;
  out.coreness.assign(n, 0);
  if (n == 0) {
    out.layers.resize(1);
    return out;
  }
  std::size_t max_deg = 0;
  std::vector<int> deg(n);
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(g.degree(static_cast<NodeId>(v)));
    max_deg = std::max<std::size_t>(max_deg, deg[v]);
  }
  // bin[d] = start of the degree-d bucket inside `order`.
  std::vector<std::size_t> bin(max_deg + 1, 0);
  for (int d : deg) ++bin[d];
  std::size_t start = 0;
  for (auto& b : bin) {
    const auto cnt = b;
    b = start;
    start += cnt;
  }
  std::vector<NodeId> order(n);
  std::vector<std::size_t> pos(n);
  for (std::size_t v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = static_cast<NodeId>(v);
  }
  for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    for (NodeId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        // Swap u with the first node of its bucket, then shrink the bucket.
        const int du = deg[u];
        const std::size_t pu = pos[u];
        const std::size_t pw = bin[du];
        const NodeId w = order[pw];
        if (u != w) {
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
          pos[u] = pw;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    out.coreness[v] = deg[v];
    out.max_coreness = std::max(out.max_coreness, deg[v]);
  }
  out.layers.resize(static_cast<std::size_t>(out.max_coreness) + 1);
  for (std::size_t v = 0; v < n; ++v) out.layers[out.coreness[v]].push_back(static_cast<NodeId>(v));
  return out;
}

std::size_t MinDegree(const Graph& g) {
  if (g.num_nodes() == 0) throw std::invalid_argument("minimum degree of the empty graph is undefined");
  std::size_t best = g.degree(0);
  for (std::size_t v = 1; v < g.num_nodes(); ++v) best = std::min(best, g.degree(static_cast<NodeId>(v)));
  return best;
}

std::size_t MinDegreeIn(const Graph& g, const NodeSet& s) {
  if (s.empty()) throw std::invalid_argument("minimum degree of the empty graph is undefined");
  std::size_t best = g.num_nodes();
  for (NodeId v : s.ToVector()) {
    std::size_t d = 0;
    for (NodeId u : g.neighbors(v)) d += s.contains(u);
    best = std::min(best, d);
  }
  return best;
}

std::size_t EdgesWithin(const Graph& g, const NodeSet& s) {
  std::size_t twice = 0;
  for (NodeId v : s.ToVector()) {
    for (NodeId u : g.neighbors(v)) twice += s.contains(u);
  }
  return twice / 2;
}

}  // namespace ckc
