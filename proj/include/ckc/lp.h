// Linear programs for k-core detection, a dense simplex solver, and the dual
// of the detection LP.

#ifndef CKC_LP_H_
#define CKC_LP_H_

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ckc/graph.h"

namespace ckc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct LpRow {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct LpProblem {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<std::string> names;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  std::size_t num_vars() const { return names.size(); }
  int AddVariable(std::string name, double cost, double lo, double hi);
  void AddRow(std::string name, std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs);
  // Index of the variable with this name, if any. Linear scan.
  std::optional<int> Find(std::string_view name) const;
  // Throws std::invalid_argument on out-of-range indices, inverted or NaN
  // bounds, or size mismatches.
  void Validate() const;
  // Objective value of `x` in the problem's own sense.
  double Evaluate(const std::vector<double>& x) const;
  // Largest bound or row violation of `x`.
  double MaxViolation(const std::vector<double>& x) const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string_view LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  // One multiplier per row, oriented so that for a minimization a >= row has
  // a nonnegative multiplier (signs flip for maximization).
  std::vector<double> duals;
  // c - A^T y per variable.
  std::vector<double> reduced_costs;
  double objective = 0.0;
  // b^T y plus the bound terms; equals `objective` at optimality.
  double dual_objective = 0.0;
  int iterations = 0;
  // Structural and logical columns basic at termination, in row order.
  std::vector<int> basis;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  // Dantzig pricing until this many consecutive degenerate pivots, then
  // Bland's rule until the objective moves again.
  int degenerate_switch = 50;
  int max_iterations = 1000000;
};

// Two-phase primal simplex on a dense tableau. Variables need a finite lower
// or upper bound, or are split when free.
LpSolution SimplexSolve(const LpProblem& problem, const SimplexOptions& options = {});

struct DetectionOptions {
  // Add x_ij >= u_i + u_j - 1 per edge and the bound x <= 1; both are
  // implied by the remaining rows at an optimum.
  bool mccormick_lower = false;
  bool x_upper = false;
};

// min sum u_i over u in [0,1]^n and x >= 0 (one x per undirected edge) with
// rows, for each node i:
//   lin1_i: sum_{j in N(i)} u_j - sum_{j in N(i)} x_ij - (k - |N(i)|) u_i <= |N(i)| - k
// for each edge {i, j} with i < j:
//   lin2_i_j: x_ij - u_i <= 0        lin3_i_j: x_ij - u_j <= 0
// and for each node i:
//   lin4_i: u_i >= w_i
// Variables are named u_<i> and x_<i>_<j>. An empty `w` means no interdiction.
LpProblem BuildDetectionLp(const Graph& g, int k, const NodeSet& w, const DetectionOptions& options = {});
LpProblem BuildDetectionLp(const Graph& g, int k, const DetectionOptions& options = {});

// max sum_i (k - |N(i)|) alpha_i + w_i lambda_i - tau_i subject to
//   dual1_i:   (k - |N(i)|) alpha_i + lambda_i - tau_i
//              + sum_{j in N(i)} (-alpha_j + beta_i_j + gamma_j_i) <= 1
//   dual2_i_j: alpha_i - beta_i_j - gamma_i_j <= 0     for every ordered pair
// with every variable nonnegative. beta_i_j multiplies x_ij <= u_i and
// gamma_i_j multiplies x_ij <= u_j, x indexed by ordered pairs.
LpProblem BuildDual(const Graph& g, int k, const NodeSet& w);

// Values of the variables named u_<i>, indexed by i.
std::vector<double> NodeValues(const LpProblem& problem, const LpSolution& solution);

// True iff every u_<i> value lies within `tol` of 0 or 1.
bool VerifyIntegrality(const LpProblem& problem, const LpSolution& solution, double tol = 1e-6);

}  // namespace ckc

#endif  // CKC_LP_H_
