#include "ckc/solver.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "ckc/bounds.h"
#include "json.hpp"

namespace ckc {
namespace {

class Deadline {
 public:
  explicit Deadline(double seconds) : start_(Clock::now()), limit_(seconds) {}
  double Elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  bool Expired() const { return Elapsed() >= limit_; }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_;
  double limit_;
};

void RequirePreprocessed(const Instance& inst) {
  if (!inst.IsPreprocessed()) throw std::invalid_argument("solver requires a preprocessed instance");
}

SolverResult InfeasibleResult(const Instance& inst) {
  SolverResult r;
  r.best_w = NodeSet(inst.n());
  r.status = SolveStatus::kInfeasible;
  return r;
}

// Fills `w` up to b nodes: survivors first, then the lowest unused ids.
void PadTo(NodeSet& w, const NodeSet& alive, int b) {
  for (NodeId v : alive.ToVector()) {
    if (static_cast<int>(w.size()) >= b) return;
    w.insert(v);
  }
  for (NodeId v = 0; static_cast<std::size_t>(v) < w.universe() && static_cast<int>(w.size()) < b; ++v) w.insert(v);
}

// Nodes ordered by decreasing follower-set size, ties by id, after dropping
// dominated nodes and all but the smallest id of each follower class.
std::vector<NodeId> BranchingCandidates(const FollowersTable& table, bool dominance, bool symmetry) {
  const auto n = static_cast<NodeId>(table.size());
  std::vector<bool> keep(n, true);
  if (dominance) {
    for (NodeId j = 0; j < n; ++j) {
      for (NodeId i : table[j].ToVector()) {
        if (i != j && table[i].size() < table[j].size() && table[i].IsSubsetOf(table[j])) keep[i] = false;
      }
    }
  }
  if (symmetry) {
    for (const auto& cls : FollowerClasses(table)) {
      for (std::size_t t = 1; t < cls.size(); ++t) keep[cls[t]] = false;
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n; ++v)
    if (keep[v]) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [&](NodeId a, NodeId b) { return table[a].size() > table[b].size(); });
  return out;
}

class BranchAndBoundSearch {
 public:
  BranchAndBoundSearch(const Instance& inst, const SolverConfig& cfg, const FollowersTable& table, bool followers,
                       const Deadline& deadline)
      : inst_(inst), deadline_(deadline), table_(table), followers_(followers), peeler_(inst.graph, inst.k) {
    candidates_ = BranchingCandidates(table, cfg.use_dominance, cfg.use_symmetry);
    if (followers_) {
      containing_.assign(inst.n(), {});
      for (NodeId u = 0; static_cast<std::size_t>(u) < inst.n(); ++u)
        for (NodeId x : table[u].ToVector()) containing_[x].push_back(u);
      hits_.assign(inst.n(), 0);
    }
  }

  void Run(int m, const GreedyResult& start) {
    m_ = m;
    best_ = start.removed;
    best_value_ = start.value;
    chosen_.clear();
    Dfs(0, NodeSet::Full(inst_.n()));
  }

  const NodeSet& best() const { return best_; }
  int best_value() const { return best_value_; }
  std::uint64_t nodes() const { return nodes_; }
  bool timed_out() const { return timed_out_; }

 private:
  void Offer(const NodeSet& alive, int value) {
    if (value >= best_value_) return;
    NodeSet w = NodeSet::FromIds(inst_.n(), chosen_);
    PadTo(w, alive, inst_.b);
    best_ = std::move(w);
    best_value_ = value;
  }

  // True when some chosen node would already be removed by the others.
  bool HasRedundantMember() {
    if (chosen_.size() < 2) return false;
    for (std::size_t skip = 0; skip < chosen_.size(); ++skip) {
      NodeSet rest = NodeSet::Full(inst_.n());
      for (std::size_t t = 0; t < chosen_.size(); ++t)
        if (t != skip) rest.erase(chosen_[t]);
      if (!peeler_.Core(rest).contains(chosen_[skip])) return true;
    }
    return false;
  }

  void Dfs(std::size_t idx, const NodeSet& alive) {
    ++nodes_;
    if (timed_out_ || deadline_.Expired()) {
      timed_out_ = true;
      return;
    }
    const int left = inst_.b - static_cast<int>(chosen_.size());
    const auto alive_count = static_cast<int>(alive.size());
    if (alive_count <= left) {
      Offer(alive, 0);
      return;
    }
    if (left == 0) {
      Offer(alive, alive_count);
      return;
    }
    const int bound = std::max(m_, LowerBoundOn(inst_.graph, alive, inst_.k, left));
    if (bound >= best_value_) return;

    std::size_t next = idx;
    while (next < candidates_.size() && !alive.contains(candidates_[next])) ++next;
    if (next == candidates_.size()) return;
    int reachable = 0;
    for (std::size_t t = next; t < candidates_.size() && reachable < left; ++t) reachable += alive.contains(candidates_[t]);
    if (reachable < left) return;

    const NodeId x = candidates_[next];
    bool allowed = true;
    if (followers_) {
      for (NodeId u : containing_[x]) {
        if (hits_[u] >= 1) {
          allowed = false;
          break;
        }
      }
    }
    if (allowed) {
      chosen_.push_back(x);
      if (!HasRedundantMember()) {
        if (followers_)
          for (NodeId u : containing_[x]) ++hits_[u];
        NodeSet after = alive;
        after.erase(x);
        Dfs(next + 1, peeler_.Core(after));
        if (followers_)
          for (NodeId u : containing_[x]) --hits_[u];
      }
      chosen_.pop_back();
    }
    Dfs(next + 1, alive);
  }

  const Instance& inst_;
  const Deadline& deadline_;
  const FollowersTable& table_;
  bool followers_;
  Peeler peeler_;
  std::vector<NodeId> candidates_;
  std::vector<std::vector<NodeId>> containing_;
  std::vector<int> hits_;
  std::vector<NodeId> chosen_;
  NodeSet best_;
  int best_value_ = 0;
  int m_ = 0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

// A pooled cut in integer form: sum coeff*w + z_scale*z (sense) rhs.
struct MasterRow {
  std::vector<NodeId> nodes;
  std::vector<std::int64_t> coeffs;
  std::int64_t z_scale = 0;
  std::int64_t rhs = 0;
  Sense sense = Sense::kGreaterEqual;
  // Shared coefficient when every node carries the same one.
  std::optional<std::int64_t> uniform;
  // Positions into nodes/coeffs, largest coefficient first.
  std::vector<std::uint32_t> by_coeff;
  bool no_good = false;
};

MasterRow ToMasterRow(const Cut& cut) {
  std::int64_t scale = cut.z_coeff.denominator();
  scale = std::lcm(scale, cut.rhs.denominator());
  for (const auto& [v, c] : cut.coeffs) scale = std::lcm(scale, c.denominator());
  MasterRow row;
  row.z_scale = cut.z_coeff.numerator() * (scale / cut.z_coeff.denominator());
  row.rhs = cut.rhs.numerator() * (scale / cut.rhs.denominator());
  row.sense = cut.sense;
  row.no_good = cut.kind == CutKind::kNoGood;
  for (const auto& [v, c] : cut.coeffs) {
    row.nodes.push_back(v);
    row.coeffs.push_back(c.numerator() * (scale / c.denominator()));
  }
  if (!row.coeffs.empty() &&
      std::all_of(row.coeffs.begin(), row.coeffs.end(), [&](std::int64_t c) { return c == row.coeffs.front(); })) {
    row.uniform = row.coeffs.front();
  }
  row.by_coeff.resize(row.nodes.size());
  std::iota(row.by_coeff.begin(), row.by_coeff.end(), 0u);
  std::stable_sort(row.by_coeff.begin(), row.by_coeff.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return row.coeffs[a] > row.coeffs[b]; });
  return row;
}

std::int64_t CeilDiv(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) == (b < 0))) ? q + 1 : q;
}

struct NodeSetHash {
  std::size_t operator()(const NodeSet& s) const { return s.Hash(); }
};

// min z s.t. sum w = b, z >= m and every pooled row, solved by depth-first
// enumeration of w.
//
// Rows are split by shape. No-good rows only bind on the exact set they were
// cut at, so they live in a hash map. Rows z >= rhs - c * sum_K w with c > 0
// ("graded") depend on w only through the number of picks in K; per-level bit
// masks over these rows record which ones the current picks hit at least t
// times. Remaining picks are assumed to land in K, except for rows whose
// nodes all lie above the current depth, which are exact. Everything else is
// rescanned at each node.
class MasterSolver {
 public:
  MasterSolver(std::size_t n, int b, int m, std::vector<NodeId> order, const Deadline& deadline)
      : n_(n),
        b_(b),
        m_(m),
        order_(std::move(order)),
        deadline_(deadline),
        position_(n),
        graded_of_(n),
        relevant_(static_cast<std::size_t>(b) + 1),
        relevant_count_(static_cast<std::size_t>(b) + 1, 0),
        by_last_position_(n),
        scan_of_(n),
        state_(n, kFree) {
    for (std::size_t p = 0; p < order_.size(); ++p) position_[order_[p]] = p;
  }

  void AddRow(MasterRow row) {
    const bool z_row = row.z_scale > 0 && row.sense == Sense::kGreaterEqual;
    const bool positive = row.uniform && *row.uniform > 0;
    if (z_row && row.no_good && row.uniform && static_cast<int>(row.nodes.size()) == b_) {
      const std::int64_t value = CeilDiv(row.rhs - *row.uniform * b_, row.z_scale);
      auto [it, inserted] = no_good_.try_emplace(NodeSet::FromIds(n_, row.nodes), value);
      if (!inserted) it->second = std::max(it->second, value);
      return;
    }
    if (z_row && positive) {
      const std::size_t idx = graded_value_.size();
      if (idx % 64 == 0) {
        for (auto& words : graded_of_) words.push_back(0);
        for (auto& words : relevant_) words.push_back(0);
      }
      const std::uint64_t bit = std::uint64_t{1} << (idx % 64);
      std::size_t last = 0;
      for (NodeId v : row.nodes) {
        graded_of_[v][idx / 64] |= bit;
        last = std::max(last, position_[v]);
      }
      std::vector<std::int64_t> value(static_cast<std::size_t>(b_) + 1);
      for (int t = 0; t <= b_; ++t) {
        value[t] = std::max<std::int64_t>(m_, CeilDiv(row.rhs - *row.uniform * t, row.z_scale));
        if (value[t] > m_) {
          relevant_[t][idx / 64] |= bit;
          ++relevant_count_[t];
        }
      }
      graded_value_.push_back(std::move(value));
      by_last_position_[last].push_back(idx);
      return;
    }
    const auto idx = scan_.size();
    for (NodeId v : row.nodes) scan_of_[v].push_back(idx);
    scan_.push_back(std::move(row));
    free_.push_back(0);
    fixed_.push_back(0);
  }

  struct Outcome {
    bool found = false;
    NodeSet w;
    int value = 0;
  };

  // Smallest master value below `ceiling`; stops early on reaching `floor`.
  //
  // Rows are only ever added, so a leaf that evaluated above some floor stays
  // above it. When the previous answer sat exactly on `floor`, every leaf
  // before it in search order is known to be worse, and the scan for another
  // point at `floor` resumes from that answer.
  Outcome Solve(int floor, int ceiling) {
    if (has_cursor_ && cursor_floor_ == floor && floor < ceiling) {
      Start(floor, floor + 1);
      Dfs(0, true);
      if (best_.found || timed_out_) {
        if (best_.found) SetCursor(floor);
        return best_;
      }
    }
    Start(floor, ceiling);
    Dfs(0, false);
    if (best_.found) SetCursor(best_.value);
    return best_;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool timed_out() const { return timed_out_; }

 private:
  static constexpr char kFree = 0, kIn = 1, kOut = 2;

  std::size_t Words() const { return (graded_value_.size() + 63) / 64; }

  void Start(int floor, int ceiling) {
    floor_ = floor;
    best_ = Outcome{};
    best_.value = ceiling;
    const auto levels = static_cast<std::size_t>(b_) + 1;
    at_least_.assign(levels * levels, std::vector<std::uint64_t>(Words(), 0));
    inner_.assign(order_.size() + 1, m_);
    for (std::size_t r = 0; r < scan_.size(); ++r) {
      fixed_[r] = 0;
      free_[r] = static_cast<int>(scan_[r].nodes.size());
    }
    std::fill(state_.begin(), state_.end(), kFree);
    chosen_.clear();
    done_ = false;
  }

  void SetCursor(int floor) {
    has_cursor_ = true;
    cursor_floor_ = floor;
    cursor_in_.assign(n_, 0);
    for (NodeId v : best_.w.ToVector()) cursor_in_[v] = 1;
  }

  // Graded rows hit at least t >= 1 times by the first c picks.
  std::vector<std::uint64_t>& AtLeast(std::size_t c, int t) {
    return at_least_[c * (static_cast<std::size_t>(b_) + 1) + static_cast<std::size_t>(t)];
  }
  const std::vector<std::uint64_t>& AtLeast(std::size_t c, int t) const {
    return at_least_[c * (static_cast<std::size_t>(b_) + 1) + static_cast<std::size_t>(t)];
  }

  int HitsOf(std::size_t r) const {
    const std::size_t c = chosen_.size();
    int t = 0;
    while (t < static_cast<int>(c) && ((AtLeast(c, t + 1)[r / 64] >> (r % 64)) & 1u)) ++t;
    return t;
  }

  void Decide(NodeId v, char state, int delta) {
    if (state == kIn && delta > 0) {
      const std::size_t c = chosen_.size();
      const auto& mine = graded_of_[v];
      for (int t = 1; t <= static_cast<int>(c); ++t) {
        const auto& same = AtLeast(c - 1, t);
        auto& to = AtLeast(c, t);
        if (t == 1) {
          for (std::size_t i = 0; i < to.size(); ++i) to[i] = same[i] | mine[i];
        } else {
          const auto& below = AtLeast(c - 1, t - 1);
          for (std::size_t i = 0; i < to.size(); ++i) to[i] = same[i] | (below[i] & mine[i]);
        }
      }
    }
    for (std::size_t r : scan_of_[v]) {
      free_[r] -= delta;
      if (state == kIn) {
        const auto& row = scan_[r];
        const auto pos = std::lower_bound(row.nodes.begin(), row.nodes.end(), v) - row.nodes.begin();
        fixed_[r] += delta * row.coeffs[pos];
      }
    }
  }

  // Largest graded value with `left` picks still to place, each assumed to
  // hit the row.
  std::int64_t GradedBound(int left) const {
    std::int64_t z = m_;
    const std::size_t c = chosen_.size();
    for (int t = 0; t <= static_cast<int>(c); ++t) {
      const int e = t + left;
      if (e > b_ || relevant_count_[e] == 0) continue;
      const auto& rel = relevant_[e];
      for (std::size_t i = 0; i < rel.size(); ++i) {
        std::uint64_t bits = rel[i];
        if (t > 0) bits &= AtLeast(c, t)[i];
        if (t < static_cast<int>(c)) bits &= ~AtLeast(c, t + 1)[i];
        while (bits != 0) {
          const std::size_t r = i * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          z = std::max(z, graded_value_[r][e]);
          bits &= bits - 1;
        }
      }
    }
    return z;
  }

  // Sum of the `count` largest positive (or smallest negative) coefficients
  // among the row's undecided nodes.
  std::int64_t ExtremeFree(std::size_t r, int count, bool largest) const {
    const auto& row = scan_[r];
    if (count <= 0) return 0;
    if (row.uniform) {
      const std::int64_t u = *row.uniform;
      return (largest ? u > 0 : u < 0) ? u * count : 0;
    }
    std::int64_t sum = 0;
    const std::size_t len = row.by_coeff.size();
    for (std::size_t t = 0; t < len && count > 0; ++t) {
      const std::uint32_t pos = row.by_coeff[largest ? t : len - 1 - t];
      const std::int64_t c = row.coeffs[pos];
      if (largest ? c <= 0 : c >= 0) break;
      if (state_[row.nodes[pos]] != kFree) continue;
      sum += c;
      --count;
    }
    return sum;
  }

  // Lower bound on z over completions with `left` more picks; -1 when some
  // w-only row can no longer be satisfied.
  std::int64_t Bound(std::size_t depth, int left) const {
    std::int64_t z = std::max(inner_[depth], GradedBound(left));
    for (std::size_t r = 0; r < scan_.size(); ++r) {
      const auto& row = scan_[r];
      const int extra = std::min(left, free_[r]);
      if (row.z_scale == 0) {
        const bool ok = row.sense == Sense::kGreaterEqual ? fixed_[r] + ExtremeFree(r, extra, true) >= row.rhs
                                                          : fixed_[r] + ExtremeFree(r, extra, false) <= row.rhs;
        if (!ok) return -1;
        continue;
      }
      // Best case for the w part: as large as possible.
      const std::int64_t w_max = fixed_[r] + ExtremeFree(r, extra, true);
      z = std::max(z, CeilDiv(row.rhs - w_max, row.z_scale));
    }
    if (left == 0 && !no_good_.empty()) {
      const auto it = no_good_.find(NodeSet::FromIds(n_, chosen_));
      if (it != no_good_.end()) z = std::max(z, it->second);
    }
    return z;
  }

  // `on_cursor`: the decisions so far match the previous answer, so branches
  // ordered before it are skipped.
  void Dfs(std::size_t depth, bool on_cursor) {
    if (done_) return;
    ++nodes_;
    if (deadline_.Expired()) {
      timed_out_ = done_ = true;
      return;
    }
    if (depth > 0) {
      // Rows whose last node was just decided keep their hit count from here on.
      std::int64_t z = inner_[depth - 1];
      for (std::size_t r : by_last_position_[depth - 1]) z = std::max(z, graded_value_[r][HitsOf(r)]);
      inner_[depth] = z;
    }
    const int left = b_ - static_cast<int>(chosen_.size());
    if (static_cast<int>(order_.size() - depth) < left) return;
    const std::int64_t bound = Bound(depth, left);
    if (bound < 0 || bound >= best_.value) return;
    if (left == 0) {
      best_.found = true;
      best_.value = static_cast<int>(bound);
      best_.w = NodeSet::FromIds(n_, chosen_);
      if (bound <= floor_) done_ = true;
      return;
    }
    const NodeId v = order_[depth];
    const bool cursor_takes = on_cursor && cursor_in_[v];
    if (!on_cursor || cursor_takes) {
      state_[v] = kIn;
      chosen_.push_back(v);
      Decide(v, kIn, 1);
      Dfs(depth + 1, on_cursor);
      Decide(v, kIn, -1);
      chosen_.pop_back();
    }
    state_[v] = kOut;
    Decide(v, kOut, 1);
    Dfs(depth + 1, on_cursor && !cursor_takes);
    Decide(v, kOut, -1);
    state_[v] = kFree;
  }

  std::size_t n_;
  int b_;
  int m_;
  std::vector<NodeId> order_;
  const Deadline& deadline_;
  std::vector<std::size_t> position_;

  std::unordered_map<NodeSet, std::int64_t, NodeSetHash> no_good_;
  // graded_value_[r][t]: implied z once row r has t hits, floored at m.
  std::vector<std::vector<std::int64_t>> graded_value_;
  std::vector<std::vector<std::uint64_t>> graded_of_;
  // relevant_[t]: rows whose value at t hits exceeds m.
  std::vector<std::vector<std::uint64_t>> relevant_;
  std::vector<std::size_t> relevant_count_;
  std::vector<std::vector<std::size_t>> by_last_position_;
  std::vector<std::vector<std::uint64_t>> at_least_;
  // inner_[d]: best graded value over rows decided entirely above depth d.
  std::vector<std::int64_t> inner_;
  std::vector<MasterRow> scan_;
  std::vector<std::vector<std::size_t>> scan_of_;
  std::vector<int> free_;
  std::vector<std::int64_t> fixed_;

  std::vector<char> state_;
  std::vector<NodeId> chosen_;
  Outcome best_;
  int floor_ = 0;
  bool done_ = false;
  bool timed_out_ = false;
  bool has_cursor_ = false;
  int cursor_floor_ = 0;
  std::vector<char> cursor_in_;
  std::uint64_t nodes_ = 0;
};

std::array<std::size_t, kNumCutKinds> PoolCounts(const CutPool& pool) {
  std::array<std::size_t, kNumCutKinds> counts{};
  for (int k = 0; k < kNumCutKinds; ++k) counts[k] = pool.CountOf(static_cast<CutKind>(k));
  return counts;
}

nlohmann::json LabelJson(const std::string& label) {
  long long v = 0;
  const char* end = label.data() + label.size();
  auto [ptr, ec] = std::from_chars(label.data(), end, v);
  if (ec == std::errc() && ptr == end) return v;
  return label;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kBrute: return "brute";
    case Method::kBranchAndBound: return "bnb";
    case Method::kCuttingPlane: return "cutting-plane";
  }
  return "unknown";
}

std::string_view StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

Method ParseMethod(std::string_view text) {
  if (text == "brute") return Method::kBrute;
  if (text == "bnb") return Method::kBranchAndBound;
  if (text == "cutting-plane") return Method::kCuttingPlane;
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

std::string SolverResult::ToJson(const Graph& g) const {
  nlohmann::json j;
  j["value"] = best_value;
  j["lb"] = proven_lb;
  auto set = nlohmann::json::array();
  for (NodeId v : best_w.ToVector()) set.push_back(LabelJson(g.label(v)));
  j["set"] = set;
  j["status"] = StatusName(status);
  j["nodes"] = nodes_explored;
  nlohmann::json cuts = nlohmann::json::object();
  for (int k = 0; k < kNumCutKinds; ++k) cuts[std::string(CutKindName(static_cast<CutKind>(k)))] = cuts_added[k];
  j["cuts"] = cuts;
  j["time"] = wall_time;
  return j.dump();
}

std::uint64_t BinomialCapped(std::uint64_t n, std::uint64_t b) {
  if (b > n) return 0;
  b = std::min(b, n - b);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= b; ++i) {
    acc = acc * (n - b + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

bool FollowerAssumptionHolds(const Instance& inst) {
  if (inst.b <= 1) return inst.n() > 0;
  if (!FollowerScreenPasses(inst)) return false;
  if (LowerBoundM(inst).m > 0) return true;
  SolverConfig cfg;
  cfg.use_followers = false;
  const Instance smaller(inst.graph, inst.k, inst.b - 1, inst.name);
  return BranchAndBound(smaller, cfg).best_value > 0;
}

SolverResult BruteForce(const Instance& inst, const SolverConfig& cfg) {
  RequirePreprocessed(inst);
  if (static_cast<std::size_t>(inst.b) > inst.n()) return InfeasibleResult(inst);
  const std::uint64_t count = BinomialCapped(inst.n(), inst.b);
  if (count > cfg.brute_force_cap) {
    throw std::length_error("enumeration of " + std::to_string(count) + " sets exceeds the cap of " +
                            std::to_string(cfg.brute_force_cap));
  }
  const Deadline deadline(cfg.time_limit);
  const int n = static_cast<int>(inst.n());
  const int b = inst.b;
  Peeler peeler(inst.graph, inst.k);
  SolverResult result;
  result.best_value = n + 1;
  std::vector<NodeId> idx(b);
  std::iota(idx.begin(), idx.end(), 0);
  bool timed_out = false;
  while (true) {
    if ((result.nodes_explored & 1023) == 0 && deadline.Expired() && result.nodes_explored > 0) {
      timed_out = true;
      break;
    }
    NodeSet alive = NodeSet::Full(n);
    for (NodeId v : idx) alive.erase(v);
    const auto value = static_cast<int>(peeler.Core(alive).size());
    ++result.nodes_explored;
    if (value < result.best_value) {
      result.best_value = value;
      result.best_w = NodeSet::FromIds(n, idx);
    }
    int i = b - 1;
    while (i >= 0 && idx[i] == n - b + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int t = i + 1; t < b; ++t) idx[t] = idx[t - 1] + 1;
  }
  result.wall_time = deadline.Elapsed();
  if (timed_out) {
    result.status = SolveStatus::kFeasible;
    result.proven_lb = std::min(result.best_value, LowerBoundM(inst).m);
  } else {
    result.status = SolveStatus::kOptimal;
    result.proven_lb = result.best_value;
  }
  return result;
}

SolverResult BranchAndBound(const Instance& inst, const SolverConfig& cfg) {
  RequirePreprocessed(inst);
  if (static_cast<std::size_t>(inst.b) > inst.n()) return InfeasibleResult(inst);
  const Deadline deadline(cfg.time_limit);
  SolverResult result;
  const int m = LowerBoundM(inst).m;
  const GreedyResult greedy = GreedyUpperBound(inst);
  const int root_bound = std::max(m, LowerBoundOn(inst.graph, NodeSet::Full(inst.n()), inst.k, inst.b));
  result.best_w = greedy.removed;
  result.best_value = greedy.value;
  if (greedy.value <= root_bound) {
    result.status = SolveStatus::kOptimal;
    result.proven_lb = greedy.value;
    result.wall_time = deadline.Elapsed();
    return result;
  }
  const FollowersTable table = ComputeFollowersTable(inst);
  result.followers_enabled = cfg.use_followers && FollowerAssumptionHolds(inst);
  if (cfg.use_dominance) result.cuts_added[static_cast<int>(CutKind::kDominance)] = DominanceCuts(table).size();
  if (cfg.use_symmetry) result.cuts_added[static_cast<int>(CutKind::kSymmetry)] = SymmetryCuts(table).size();
  if (result.followers_enabled) result.cuts_added[static_cast<int>(CutKind::kFollower)] = inst.n();

  BranchAndBoundSearch search(inst, cfg, table, result.followers_enabled, deadline);
  search.Run(m, greedy);
  result.best_w = search.best();
  result.best_value = search.best_value();
  result.nodes_explored = search.nodes();
  if (search.timed_out()) {
    result.status = SolveStatus::kFeasible;
    result.proven_lb = std::min(root_bound, result.best_value);
  } else {
    result.status = SolveStatus::kOptimal;
    result.proven_lb = result.best_value;
  }
  result.wall_time = deadline.Elapsed();
  return result;
}

SolverResult CuttingPlane(const Instance& inst, const SolverConfig& cfg) {
  RequirePreprocessed(inst);
  if (static_cast<std::size_t>(inst.b) > inst.n()) return InfeasibleResult(inst);
  const Deadline deadline(cfg.time_limit);
  const std::size_t n = inst.n();
  const int m = LowerBoundM(inst).m;
  const FollowersTable table = ComputeFollowersTable(inst);
  SolverResult result;
  result.followers_enabled = cfg.use_followers && FollowerAssumptionHolds(inst);

  const GreedyResult greedy = GreedyUpperBound(inst);
  result.best_w = greedy.removed;
  result.best_value = greedy.value;

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return table[a].size() > table[b].size(); });
  MasterSolver master(n, inst.b, m, order, deadline);
  CutPool pool;
  std::vector<int> involvement(n, 0);
  auto add = [&](Cut cut) {
    const Cut copy = cut;
    if (!pool.Add(std::move(cut))) return false;
    for (const auto& [v, c] : copy.coeffs) ++involvement[v];
    master.AddRow(ToMasterRow(copy));
    return true;
  };
  if (cfg.use_dominance)
    for (auto& c : DominanceCuts(table)) add(std::move(c));
  if (cfg.use_symmetry)
    for (auto& c : SymmetryCuts(table)) add(std::move(c));
  if (result.followers_enabled)
    for (auto& c : FollowerCuts(inst, table).cuts) add(std::move(c));

  Peeler peeler(inst.graph, inst.k);
  int last_master = m;
  bool optimal = false;
  while (true) {
    if (result.best_value <= last_master) {
      optimal = true;
      break;
    }
    const auto outcome = master.Solve(last_master, result.best_value);
    if (master.timed_out()) break;
    if (!outcome.found) {
      // No master point below the incumbent: the incumbent is optimal.
      optimal = true;
      break;
    }
    const int z_hat = outcome.value;
    last_master = z_hat;
    result.master_values.push_back(z_hat);
    const NodeSet& w_hat = outcome.w;
    const NodeSet core = Collapse(inst, w_hat).survivors;
    const auto value = static_cast<int>(core.size());
    if (value < result.best_value) {
      result.best_value = value;
      result.best_w = w_hat;
    }
    if (z_hat >= value) {
      optimal = true;
      break;
    }

    std::size_t added = 0;
    bool follower_cut_found = false;
    if (result.followers_enabled) {
      for (NodeId j : w_hat.ToVector()) {
        NodeSet rest = w_hat;
        rest.erase(j);
        if (!FollowersOfSet(inst, rest).contains(j)) continue;
        try {
          if (add(GeneralFollowerCut(inst, rest))) {
            ++added;
            follower_cut_found = true;
          }
        } catch (const std::invalid_argument&) {
        }
      }
    }
    if (!follower_cut_found && z_hat < value) {
      if (value > m) added += add(BigMCut(inst, core, m));
      added += add(NoGoodCut(inst, w_hat, m));
    }
    NodeSet shrinking = core;
    for (int grown = 0; grown < cfg.u_threshold && !shrinking.empty(); ++grown) {
      NodeId pick = -1;
      for (NodeId v : shrinking.ToVector())
        if (pick < 0 || involvement[v] > involvement[pick]) pick = v;
      shrinking.erase(pick);
      shrinking = peeler.Core(shrinking);
      const auto size = static_cast<int>(shrinking.size());
      if (size <= m || z_hat >= size) break;
      added += add(BigMCut(inst, shrinking, m));
    }
    const NodeSet rest = w_hat.Complement();
    for (int h = inst.k + 1; h <= inst.k + cfg.ell_offset; ++h) {
      const NodeSet hcore = PeelToCore(inst.graph, rest, h);
      if (hcore.empty() || static_cast<int>(hcore.size()) - h + inst.k <= m) continue;
      added += add(HCoreCut(inst, hcore, h, m));
    }
    if (added == 0) {
      // Every separated cut was already pooled, so the master could not have
      // returned this point; treat it as a stall.
      break;
    }
  }
  result.nodes_explored = master.nodes();
  result.cuts_added = PoolCounts(pool);
  if (optimal) {
    result.status = SolveStatus::kOptimal;
    result.proven_lb = result.best_value;
  } else {
    result.status = SolveStatus::kFeasible;
    result.proven_lb = std::min(last_master, result.best_value);
  }
  result.wall_time = deadline.Elapsed();
  return result;
}

SolverResult Solve(const Instance& inst, const SolverConfig& cfg) {
  switch (cfg.method) {
    case Method::kBrute: return BruteForce(inst, cfg);
    case Method::kBranchAndBound: return BranchAndBound(inst, cfg);
    case Method::kCuttingPlane: return CuttingPlane(inst, cfg);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace ckc
