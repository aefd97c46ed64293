#include "ckc/inequalities.h"

#include <algorithm>
#include <unordered_map>
#include <stdexcept>

#include "ckc/bounds.h"
#include "json.hpp"

namespace ckc {
namespace {

std::vector<std::pair<NodeId, Rational>> UniformCoeffs(const NodeSet& s, Rational c) {
  std::vector<std::pair<NodeId, Rational>> out;
  if (c.numerator() == 0) return out;
  for (NodeId v : s.ToVector()) out.emplace_back(v, c);
  return out;
}

std::string RationalText(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

nlohmann::json RationalJson(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return RationalText(r);
}

void RequireUniverse(const Instance& inst, const NodeSet& s) {
  if (s.universe() != inst.n()) throw std::out_of_range("node set universe does not match the instance");
}

}  // namespace

std::string_view CutKindName(CutKind kind) {
  switch (kind) {
    case CutKind::kDominance: return "dominance";
    case CutKind::kSymmetry: return "symmetry";
    case CutKind::kFollower: return "follower";
    case CutKind::kGeneralFollower: return "general_follower";
    case CutKind::kBigM: return "bigm";
    case CutKind::kNoGood: return "nogood";
    case CutKind::kHCore: return "hcore";
  }
  return "unknown";
}

Rational Cut::Lhs(const NodeSet& w, std::int64_t z) const {
  Rational lhs = z_coeff * z;
  for (const auto& [v, c] : coeffs) {
    if (w.contains(v)) lhs += c;
  }
  return lhs;
}

bool Cut::Evaluate(const NodeSet& w, std::int64_t z) const {
  const Rational lhs = Lhs(w, z);
  return sense == Sense::kGreaterEqual ? lhs >= rhs : lhs <= rhs;
}

std::string Cut::ToJson() const {
  nlohmann::json j;
  j["kind"] = CutKindName(kind);
  j["nodes"] = provenance;
  auto cj = nlohmann::json::array();
  for (const auto& [v, c] : coeffs) cj.push_back({v, RationalJson(c)});
  j["coeffs"] = cj;
  j["z_coeff"] = RationalJson(z_coeff);
  j["rhs"] = RationalJson(rhs);
  j["sense"] = sense == Sense::kGreaterEqual ? ">=" : "<=";
  if (kind == CutKind::kHCore) j["h"] = parameter;
  return j.dump();
}

std::size_t CutPool::KeyHash::operator()(const Key& key) const {
  std::size_t h = static_cast<std::size_t>(key.kind) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::size_t>(key.parameter);
  for (NodeId v : key.provenance) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL;
  return h;
}

bool CutPool::Add(Cut cut) {
  Key key{cut.kind, cut.parameter, cut.provenance};
  if (!keys_.insert(std::move(key)).second) return false;
  ++per_kind_[static_cast<int>(cut.kind)];
  cuts_.push_back(std::move(cut));
  return true;
}

std::size_t CutPool::Add(std::vector<Cut> cuts) {
  std::size_t added = 0;
  for (auto& c : cuts) added += Add(std::move(c));
  return added;
}

std::vector<Cut> DominanceCuts(const FollowersTable& table) {
  std::vector<Cut> out;
  const auto n = static_cast<NodeId>(table.size());
  for (NodeId j = 0; j < n; ++j) {
    for (NodeId i : table[j].ToVector()) {
      if (i == j) continue;
      if (table[i].size() < table[j].size() && table[i].IsSubsetOf(table[j])) {
        Cut c;
        c.kind = CutKind::kDominance;
        c.coeffs = {{std::min(i, j), Rational(i < j ? -1 : 1)}, {std::max(i, j), Rational(i < j ? 1 : -1)}};
        c.rhs = 0;
        c.sense = Sense::kGreaterEqual;
        c.provenance = {j, i};
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::vector<std::vector<NodeId>> FollowerClasses(const FollowersTable& table) {
  std::vector<std::vector<NodeId>> classes;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
  for (NodeId v = 0; static_cast<std::size_t>(v) < table.size(); ++v) {
    auto& bucket = by_hash[table[v].Hash()];
    bool placed = false;
    for (std::size_t ci : bucket) {
      if (table[classes[ci].front()] == table[v]) {
        classes[ci].push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) {
      bucket.push_back(classes.size());
      classes.push_back({v});
    }
  }
  return classes;
}

std::vector<Cut> SymmetryCuts(const FollowersTable& table) {
  std::vector<Cut> out;
  for (const auto& cls : FollowerClasses(table)) {
    for (std::size_t t = 0; t + 1 < cls.size(); ++t) {
      Cut c;
      c.kind = CutKind::kSymmetry;
      c.coeffs = {{cls[t], Rational(1)}, {cls[t + 1], Rational(-1)}};
      c.rhs = 0;
      c.sense = Sense::kGreaterEqual;
      c.provenance = {cls[t], cls[t + 1]};
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool FollowerScreenPasses(const Instance& inst) {
  if (inst.b <= 0) return inst.n() > 0;
  return GreedyUpperBound(inst, inst.b - 1).value > 0;
}

FollowerCutResult FollowerCuts(const Instance& inst, const FollowersTable& table) {
  FollowerCutResult result;
  if (!FollowerScreenPasses(inst)) {
    result.suppressed = true;
    result.reason = "removing b-1 nodes greedily empties the network";
    return result;
  }
  for (NodeId u = 0; static_cast<std::size_t>(u) < table.size(); ++u) {
    Cut c;
    c.kind = CutKind::kFollower;
    c.coeffs = UniformCoeffs(table[u], 1);
    c.rhs = 1;
    c.sense = Sense::kLessEqual;
    c.provenance = {u};
    result.cuts.push_back(std::move(c));
  }
  return result;
}

Cut GeneralFollowerCut(const Instance& inst, const NodeSet& s) {
  RequireUniverse(inst, s);
  const auto size = static_cast<int>(s.size());
  if (size >= inst.b) throw std::invalid_argument("general follower cut needs |S| < b");
  const NodeSet followers = FollowersOfSet(inst, s);
  if (followers.empty()) throw std::invalid_argument("general follower cut: J_S is empty");
  const auto remaining = static_cast<int>(inst.n() - followers.size());
  if (remaining < inst.b - size) {
    throw std::invalid_argument("general follower cut: fewer than b-|S| nodes survive the removal of S");
  }
  Cut c;
  c.kind = CutKind::kGeneralFollower;
  c.coeffs = UniformCoeffs(followers, 1);
  c.rhs = size;
  c.sense = Sense::kLessEqual;
  c.provenance = s.ToVector();
  return c;
}

Cut BigMCut(const Instance& inst, const NodeSet& k_set, int m) {
  RequireUniverse(inst, k_set);
  const auto size = static_cast<int>(k_set.size());
  if (size <= m) throw std::invalid_argument("big-M cut needs |K| > m");
  if (MinDegreeIn(inst.graph, k_set) < static_cast<std::size_t>(inst.k)) {
    throw std::invalid_argument("big-M cut needs a k-subcore");
  }
  Cut c;
  c.kind = CutKind::kBigM;
  c.coeffs = UniformCoeffs(k_set, size - m);
  c.z_coeff = 1;
  c.rhs = size;
  c.provenance = k_set.ToVector();
  return c;
}

Cut NoGoodCut(const Instance& inst, const NodeSet& w_set, int m) {
  RequireUniverse(inst, w_set);
  if (static_cast<int>(w_set.size()) != inst.b) throw std::invalid_argument("no-good cut needs |W| = b");
  const auto survivors = static_cast<std::int64_t>(Collapse(inst, w_set).survivors.size());
  const Rational slope = survivors - m;
  Cut c;
  c.kind = CutKind::kNoGood;
  c.coeffs = UniformCoeffs(w_set, -slope);
  c.z_coeff = 1;
  c.rhs = Rational(m) + slope * Rational(1 - inst.b);
  c.provenance = w_set.ToVector();
  return c;
}

Cut HCoreCut(const Instance& inst, const NodeSet& k_set, int h, int m) {
  RequireUniverse(inst, k_set);
  if (h <= inst.k) throw std::invalid_argument("h-core cut needs h > k");
  if (k_set.empty() || MinDegreeIn(inst.graph, k_set) < static_cast<std::size_t>(h)) {
    throw std::invalid_argument("h-core cut needs an h-subcore");
  }
  const int guaranteed = static_cast<int>(k_set.size()) - h + inst.k;
  if (guaranteed <= m) throw std::invalid_argument("h-core cut needs |K| - h + k > m");
  Cut c;
  c.kind = CutKind::kHCore;
  c.coeffs = UniformCoeffs(k_set, Rational(guaranteed - m, h - inst.k + 1));
  c.z_coeff = 1;
  c.rhs = guaranteed;
  c.provenance = k_set.ToVector();
  c.parameter = h;
  return c;
}

}  // namespace ckc
