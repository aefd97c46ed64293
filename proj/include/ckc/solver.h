// Exact methods for the collapsed k-core problem: exhaustive enumeration,
// combinatorial branch-and-bound, and a cutting-plane loop over a master
// problem in (w, z).

#ifndef CKC_SOLVER_H_
#define CKC_SOLVER_H_

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ckc/cascade.h"
#include "ckc/inequalities.h"

namespace ckc {

enum class Method { kBrute, kBranchAndBound, kCuttingPlane };
enum class SolveStatus { kOptimal, kFeasible, kInfeasible };

std::string_view MethodName(Method method);
std::string_view StatusName(SolveStatus status);
// Accepts "brute", "bnb" and "cutting-plane".
Method ParseMethod(std::string_view text);

struct SolverConfig {
  Method method = Method::kBranchAndBound;
  // Step-4 growth of the separation loop stops once |U| reaches this size.
  int u_threshold = 10;
  // h-core cuts are tried for h = k+1 .. k+ell_offset.
  int ell_offset = 2;
  // Seconds; infinity disables the limit.
  double time_limit = std::numeric_limits<double>::infinity();
  bool use_dominance = true;
  bool use_symmetry = true;
  bool use_followers = true;
  // Largest number of b-subsets the enumeration accepts.
  std::uint64_t brute_force_cap = 10'000'000;
};

struct SolverResult {
  NodeSet best_w;
  int best_value = 0;
  int proven_lb = 0;
  SolveStatus status = SolveStatus::kInfeasible;
  std::uint64_t nodes_explored = 0;
  std::array<std::size_t, kNumCutKinds> cuts_added{};
  double wall_time = 0.0;
  // Whether the follower-set restrictions were active.
  bool followers_enabled = false;
  // Master objective after every cutting-plane iteration.
  std::vector<int> master_values;

  // {value, lb, set, status, nodes, cuts:{...}, time}; `set` uses the
  // graph's node labels.
  std::string ToJson(const Graph& g) const;
};

// Number of b-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t BinomialCapped(std::uint64_t n, std::uint64_t b);

// True when no b-1 removals can empty the network. The greedy screen runs
// first; when the lower bound is zero the claim is settled exactly by a
// branch-and-bound on budget b-1.
bool FollowerAssumptionHolds(const Instance& inst);

// Lexicographically smallest optimal set. Throws std::length_error when
// C(n, b) exceeds cfg.brute_force_cap.
SolverResult BruteForce(const Instance& inst, const SolverConfig& cfg = {});
SolverResult BranchAndBound(const Instance& inst, const SolverConfig& cfg = {});
SolverResult CuttingPlane(const Instance& inst, const SolverConfig& cfg = {});
// Dispatches on cfg.method. The instance must be preprocessed.
SolverResult Solve(const Instance& inst, const SolverConfig& cfg);

}  // namespace ckc

#endif  // CKC_SOLVER_H_
