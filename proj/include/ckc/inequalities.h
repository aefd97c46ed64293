// Valid inequalities over the interdiction vector w (binary, one entry per
// node) and the surviving-core size z. Every cut is kept in the normal form
//
//     sum_i coeff_i * w_i + z_coeff * z  (>= | <=)  rhs
//
// with exact rational coefficients.

#ifndef CKC_INEQUALITIES_H_
#define CKC_INEQUALITIES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "ckc/cascade.h"

namespace ckc {

using Rational = boost::rational<std::int64_t>;

enum class CutKind { kDominance, kSymmetry, kFollower, kGeneralFollower, kBigM, kNoGood, kHCore };
inline constexpr int kNumCutKinds = 7;

std::string_view CutKindName(CutKind kind);

enum class Sense { kGreaterEqual, kLessEqual };

struct Cut {
  CutKind kind = CutKind::kBigM;
  // Sorted by node id, no zero entries.
  std::vector<std::pair<NodeId, Rational>> coeffs;
  Rational z_coeff{0};
  Rational rhs{0};
  Sense sense = Sense::kGreaterEqual;
  // Originating set: K, W, S, the ordered pair (j, i), or the node u.
  std::vector<NodeId> provenance;
  // Extra key component; the core degree h for HCore cuts, 0 otherwise.
  int parameter = 0;

  Rational Lhs(const NodeSet& w, std::int64_t z) const;
  bool Evaluate(const NodeSet& w, std::int64_t z) const;
  // {kind, nodes, coeffs, z_coeff, rhs, sense}; rationals as "p/q" strings
  // when not integral.
  std::string ToJson() const;
};

// Append-only pool keyed by (kind, parameter, provenance).
class CutPool {
 public:
  // Returns false when an equal-key cut is already present.
  bool Add(Cut cut);
  std::size_t Add(std::vector<Cut> cuts);

  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  std::size_t CountOf(CutKind kind) const { return per_kind_[static_cast<int>(kind)]; }

 private:
  struct Key {
    CutKind kind;
    int parameter;
    std::vector<NodeId> provenance;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  std::vector<Cut> cuts_;
  std::unordered_set<Key, KeyHash> keys_;
  std::size_t per_kind_[kNumCutKinds] = {};
};

// w_j - w_i >= 0 for every i in J_j with J_i a strict subset of J_j.
std::vector<Cut> DominanceCuts(const FollowersTable& table);

// Nodes with identical follower sets form a class; each class i1 < i2 < ...
// yields the chain w_i1 >= w_i2 >= ...
std::vector<std::vector<NodeId>> FollowerClasses(const FollowersTable& table);
std::vector<Cut> SymmetryCuts(const FollowersTable& table);

struct FollowerCutResult {
  std::vector<Cut> cuts;
  bool suppressed = false;
  std::string reason;
};

// Greedy screen: removes b-1 nodes by largest follower set. True when the
// network is still nonempty afterwards.
bool FollowerScreenPasses(const Instance& inst);

// sum_{j in J_u} w_j <= 1 for every u, unless the greedy screen empties the
// network with b-1 removals.
FollowerCutResult FollowerCuts(const Instance& inst, const FollowersTable& table);

// sum_{j in J_S} w_j <= |S|. Throws std::invalid_argument with the reason when
// |S| >= b, J_S is empty, or |C_k(G \ S)| < b - |S|.
Cut GeneralFollowerCut(const Instance& inst, const NodeSet& s);

// z + (|K| - m) sum_{i in K} w_i >= |K|. Throws unless G[K] has minimum degree
// at least k and |K| > m.
Cut BigMCut(const Instance& inst, const NodeSet& k_set, int m);

// z - (C - m) sum_{i in W} w_i >= m + (C - m)(1 - b), C = |C_k(G \ W)|.
// Throws unless |W| = b.
Cut NoGoodCut(const Instance& inst, const NodeSet& w_set, int m);

// z + (|K| - h + k - m)/(h - k + 1) sum_{i in K} w_i >= |K| - h + k.
// Throws unless h > k, G[K] has minimum degree at least h and
// |K| - h + k > m.
Cut HCoreCut(const Instance& inst, const NodeSet& k_set, int h, int m);

}  // namespace ckc

#endif  // CKC_INEQUALITIES_H_
