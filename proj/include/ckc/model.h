// Solver-agnostic model IR for the collapse formulations, LP-format text I/O,
// and a row-by-row checker for candidate assignments.

#ifndef CKC_MODEL_H_
#define CKC_MODEL_H_

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ckc/cascade.h"
#include "ckc/inequalities.h"
#include "ckc/lp.h"

namespace ckc {

enum class VarKind { kContinuous, kInteger, kBinary };

struct ModelVar {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInfinity;
  friend bool operator==(const ModelVar&, const ModelVar&) = default;
};

struct BilinearTerm {
  int first = 0;
  int second = 0;
  double coeff = 0.0;
  friend bool operator==(const BilinearTerm&, const BilinearTerm&) = default;
};

struct ModelRow {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;
  std::vector<BilinearTerm> bilinear;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

struct ModelIR {
  std::string name;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<ModelVar> vars;
  std::vector<ModelRow> rows;
  std::vector<std::pair<int, double>> objective;
  std::vector<BilinearTerm> objective_bilinear;
  double objective_constant = 0.0;

  // Binary variables get bounds [0, 1] regardless of the arguments.
  int AddVar(std::string var_name, VarKind kind, double lo = 0.0, double hi = kInfinity);
  void AddRow(ModelRow row);
  // Throws std::out_of_range for unknown names.
  int Index(const std::string& var_name) const;
  bool IsLinear() const;
  std::size_t CountRowsWithPrefix(const std::string& prefix) const;
  // {name, sense, vars:[{name,kind,lb,ub}], rows:[...], objective:{...}};
  // infinite bounds as null.
  std::string ToJson() const;

  friend bool operator==(const ModelIR& a, const ModelIR& b) {
    return a.name == b.name && a.sense == b.sense && a.vars == b.vars && a.rows == b.rows &&
           a.objective == b.objective && a.objective_bilinear == b.objective_bilinear &&
           a.objective_constant == b.objective_constant;
  }

 private:
  std::unordered_map<std::string, int> index_;
  std::unordered_set<std::string> row_names_;
};

struct TimeDependentOptions {
  bool with_cuts = false;
};

// Binary a_<i>_<t>, t = 0..T with T = n - b - m; min sum_i a_i^T subject to
// the budget row, a_i^t <= a_i^{t-1}, and the neighbour-count rows. With
// cuts: dominance, symmetry and follower rows on a^0 (followers only when no
// b-1 removals can empty the graph) plus sum_i a_i^T >= m.
ModelIR EmitTimeDependent(const Instance& inst, const TimeDependentOptions& options = {});

// Binary w_<i>, integer z >= m; min z subject to sum w = b, z >= m and one
// row per pooled cut scaled to integer coefficients.
ModelIR EmitSparseMaster(const Instance& inst, const CutPool& pool);

struct NonlinearDualOptions {
  // Replace each w_i * lambda_i by p_i with McCormick rows and lambda <= big_m.
  bool linearize = false;
  // 0 selects n. Optimal duals can need lambda_i > n, in which case the
  // linearized model overestimates the optimum; raise big_m to recover it.
  double big_m = 0.0;
};

// min n - v subject to v <= sum_i (k - |N(i)|) alpha_i + w_i lambda_i - tau_i,
// sum w = b and the dual feasibility rows of the detection LP.
ModelIR EmitNonlinearDual(const Instance& inst, const NonlinearDualOptions& options = {});

ModelIR EmitDetectionLp(const Graph& g, int k, const NodeSet& w);
ModelIR FromLpProblem(const LpProblem& problem, const std::string& name = {});

// LP-format text: Minimize/Maximize, Subject To, Bounds, Generals, Binaries,
// End. Every variable appears in Bounds, in IR order. Throws
// std::invalid_argument for models with bilinear terms or empty rows.
std::string WriteLpText(const ModelIR& model);
// Parses the whitespace-separated subset of LP format that WriteLpText
// produces. Quadratic sections are rejected with ParseError.
ModelIR ParseLpText(const std::string& text);

using Assignment = std::map<std::string, double>;

struct ModelCheck {
  bool feasible = true;
  std::vector<std::string> violations;
  double objective = 0.0;
};

// Integer rows (integral coefficients over integer variables) are checked
// exactly; other rows with a 1e-9 tolerance relative to the row's magnitude.
// Throws std::invalid_argument listing variables missing from `values`.
ModelCheck EvaluateModel(const ModelIR& model, const Assignment& values);

// a_i^t for the synchronous cascade after removing `w`, padded to `horizon`.
// Throws std::invalid_argument when |w| != b and std::length_error when the
// cascade needs more than `horizon` rounds.
Assignment CascadeToAssignment(const Instance& inst, const NodeSet& w, int horizon);

// Assignment for EmitNonlinearDual with the same options: w from `w`, the
// dual variables from an optimal solution of BuildDual on G with w
// interdicted (lambda <= big_m when linearized), v = the largest integer not
// above its objective.
Assignment DualAssignment(const Instance& inst, const NodeSet& w, const NonlinearDualOptions& options = {});

}  // namespace ckc

#endif  // CKC_MODEL_H_
