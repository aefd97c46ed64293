#include "ckc/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckc {

int LpProblem::AddVariable(std::string name, double cost, double lo, double hi) {
  names.push_back(std::move(name));
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return static_cast<int>(names.size()) - 1;
}

void LpProblem::AddRow(std::string name, std::vector<std::pair<int, double>> coeffs, RowSense row_sense, double rhs) {
  rows.push_back(LpRow{std::move(name), std::move(coeffs), row_sense, rhs});
}

std::optional<int> LpProblem::Find(std::string_view name) const {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) return static_cast<int>(j);
  return std::nullopt;
}

void LpProblem::Validate() const {
  const std::size_t n = names.size();
  if (objective.size() != n || lower.size() != n || upper.size() != n)
    throw std::invalid_argument("variable arrays differ in length");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || std::isnan(objective[j]) || lower[j] > upper[j])
      throw std::invalid_argument("bad bounds or cost on variable " + names[j]);
  }
  for (const auto& row : rows) {
    if (std::isnan(row.rhs) || std::isinf(row.rhs)) throw std::invalid_argument("bad right-hand side in " + row.name);
    for (const auto& [j, a] : row.coeffs) {
      if (j < 0 || static_cast<std::size_t>(j) >= n) throw std::invalid_argument("row " + row.name + " references a missing variable");
      if (!std::isfinite(a)) throw std::invalid_argument("bad coefficient in " + row.name);
    }
  }
}

double LpProblem::Evaluate(const std::vector<double>& x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < objective.size(); ++j) v += objective[j] * x[j];
  return v;
}

double LpProblem::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < names.size(); ++j) {
    worst = std::max(worst, lower[j] - x[j]);
    worst = std::max(worst, x[j] - upper[j]);
  }
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (const auto& [j, a] : row.coeffs) lhs += a * x[j];
    if (row.sense != RowSense::kGreaterEqual) worst = std::max(worst, lhs - row.rhs);
    if (row.sense != RowSense::kLessEqual) worst = std::max(worst, row.rhs - lhs);
  }
  return worst;
}

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// One nonnegative tableau column standing for `sign * (x_var - offset)`.
struct Column {
  int var;
  double sign;
  double offset;
};

class Tableau {
 public:
  Tableau(const LpProblem& p, const SimplexOptions& options) : p_(p), opt_(options) { Build(); }

  LpSolution Run() {
    LpSolution sol;
    if (!artificial_rows_.empty()) {
      SetPhaseOneCosts();
      const LpStatus s = Iterate(/*phase_one=*/true, sol.iterations);
      if (s != LpStatus::kOptimal || objval_ > 1e-7 * (1.0 + rhs_scale_)) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
      DriveOutArtificials(sol.iterations);
    }
    SetPhaseTwoCosts();
    sol.status = Iterate(/*phase_one=*/false, sol.iterations);
    if (sol.status != LpStatus::kOptimal) return sol;
    Extract(sol);
    return sol;
  }

 private:
  double& At(std::size_t i, std::size_t j) { return t_[i * ncol_ + j]; }
  double At(std::size_t i, std::size_t j) const { return t_[i * ncol_ + j]; }

  void Build() {
    const std::size_t n = p_.num_vars();
    std::vector<std::vector<std::size_t>> cols_of(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = p_.lower[j], hi = p_.upper[j];
      if (std::isfinite(lo)) {
        cols_of[j].push_back(columns_.size());
        columns_.push_back({static_cast<int>(j), 1.0, lo});
      } else if (std::isfinite(hi)) {
        cols_of[j].push_back(columns_.size());
        columns_.push_back({static_cast<int>(j), -1.0, hi});
      } else {
        cols_of[j].push_back(columns_.size());
        columns_.push_back({static_cast<int>(j), 1.0, 0.0});
        cols_of[j].push_back(columns_.size());
        columns_.push_back({static_cast<int>(j), -1.0, 0.0});
      }
    }
    // Internal rows: problem rows, then x' <= hi - lo for doubly bounded vars.
    struct Internal {
      std::vector<std::pair<std::size_t, double>> coeffs;
      RowSense sense;
      double rhs;
    };
    std::vector<Internal> rows;
    for (const auto& row : p_.rows) {
      Internal r{{}, row.sense, row.rhs};
      for (const auto& [j, a] : row.coeffs) {
        if (a == 0.0) continue;
        for (std::size_t c : cols_of[j]) {
          r.coeffs.emplace_back(c, a * columns_[c].sign);
        }
        r.rhs -= a * (cols_of[j].size() == 1 ? columns_[cols_of[j][0]].offset : 0.0);
      }
      rows.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isfinite(p_.lower[j]) && std::isfinite(p_.upper[j])) {
        rows.push_back({{{cols_of[j][0], 1.0}}, RowSense::kLessEqual, p_.upper[j] - p_.lower[j]});
      }
    }
    m_ = rows.size();
    nstruct_ = columns_.size();
    flipped_.assign(m_, false);
    std::size_t surplus = 0;
    for (auto& r : rows) {
      if (r.rhs < 0) {
        r.rhs = -r.rhs;
        for (auto& [c, a] : r.coeffs) a = -a;
        if (r.sense == RowSense::kLessEqual) r.sense = RowSense::kGreaterEqual;
        else if (r.sense == RowSense::kGreaterEqual) r.sense = RowSense::kLessEqual;
        flipped_[&r - rows.data()] = true;
      }
      surplus += r.sense == RowSense::kGreaterEqual;
    }
    nsurplus_ = surplus;
    identity_start_ = nstruct_ + nsurplus_;
    ncol_ = identity_start_ + m_;
    t_.assign(m_ * ncol_, 0.0);
    rhs_.assign(m_, 0.0);
    basis_.assign(m_, 0);
    artificial_.assign(ncol_, false);
    std::size_t next_surplus = nstruct_;
    rhs_scale_ = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = rows[i];
      for (const auto& [c, a] : r.coeffs) At(i, c) += a;
      rhs_[i] = r.rhs;
      rhs_scale_ += r.rhs;
      if (r.sense == RowSense::kGreaterEqual) At(i, next_surplus++) = -1.0;
      At(i, identity_start_ + i) = 1.0;
      basis_[i] = identity_start_ + i;
      if (r.sense != RowSense::kLessEqual) {
        artificial_[identity_start_ + i] = true;
        artificial_rows_.push_back(i);
      }
    }
    obj_.assign(ncol_, 0.0);
  }

  // obj_ holds reduced costs d_j = c_j - c_B B^-1 A_j; objval_ = c_B x_B.
  void PriceOut(const std::vector<double>& cost) {
    obj_ = cost;
    objval_ = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      objval_ += cb * rhs_[i];
      const double* row = &t_[i * ncol_];
      for (std::size_t j = 0; j < ncol_; ++j) obj_[j] -= cb * row[j];
    }
  }

  void SetPhaseOneCosts() {
    std::vector<double> cost(ncol_, 0.0);
    for (std::size_t j = 0; j < ncol_; ++j)
      if (artificial_[j]) cost[j] = 1.0;
    PriceOut(cost);
  }

  void SetPhaseTwoCosts() {
    const double flip = p_.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    std::vector<double> cost(ncol_, 0.0);
    for (std::size_t c = 0; c < nstruct_; ++c) cost[c] = flip * p_.objective[columns_[c].var] * columns_[c].sign;
    PriceOut(cost);
  }

  void Pivot(std::size_t p, std::size_t q) {
    double* prow = &t_[p * ncol_];
    const double inv = 1.0 / prow[q];
    nz_.clear();
    for (std::size_t j = 0; j < ncol_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nz_.push_back(j);
      }
    }
    prow[q] = 1.0;
    rhs_[p] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p) continue;
      double* row = &t_[i * ncol_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[q] = 0.0;
      rhs_[i] -= f * rhs_[p];
      if (rhs_[i] < 0.0 && rhs_[i] > -opt_.tolerance) rhs_[i] = 0.0;
    }
    const double f = obj_[q];
    if (f != 0.0) {
      for (std::size_t j : nz_) obj_[j] -= f * prow[j];
      obj_[q] = 0.0;
      objval_ += f * rhs_[p];
    }
    basis_[p] = q;
  }

  bool MayEnter(std::size_t j, bool phase_one) const { return phase_one || !artificial_[j]; }

  LpStatus Iterate(bool phase_one, int& iterations) {
    int degenerate = 0;
    while (true) {
      const bool bland = degenerate >= opt_.degenerate_switch;
      std::size_t q = ncol_;
      double best = -opt_.tolerance;
      for (std::size_t j = 0; j < ncol_; ++j) {
        if (obj_[j] >= -opt_.tolerance || !MayEnter(j, phase_one)) continue;
        if (bland) {
          q = j;
          break;
        }
        if (obj_[j] < best) {
          best = obj_[j];
          q = j;
        }
      }
      if (q == ncol_) return LpStatus::kOptimal;
      std::size_t p = m_;
      double ratio = kInfinity;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = At(i, q);
        if (a <= opt_.tolerance) continue;
        const double r = rhs_[i] / a;
        // Ties go to the smallest basic column, as Bland's rule requires.
        if (p == m_ || r < ratio - 1e-12 || (r <= ratio + 1e-12 && basis_[i] < basis_[p])) {
          ratio = p == m_ ? r : std::min(ratio, r);
          p = i;
        }
      }
      if (p == m_) return LpStatus::kUnbounded;
      if (++iterations > opt_.max_iterations) throw std::runtime_error("simplex iteration limit reached");
      degenerate = ratio <= opt_.tolerance ? degenerate + 1 : 0;
      Pivot(p, q);
    }
  }

  void DriveOutArtificials(int& iterations) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!artificial_[basis_[i]]) continue;
      for (std::size_t j = 0; j < ncol_; ++j) {
        if (artificial_[j] || std::abs(At(i, j)) <= 1e-9) continue;
        Pivot(i, j);
        ++iterations;
        break;
      }
    }
  }

  void Extract(LpSolution& sol) const {
    const std::size_t n = p_.num_vars();
    std::vector<double> value(ncol_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) value[basis_[i]] = rhs_[i];
    sol.x.assign(n, 0.0);
    std::vector<bool> split_seen(n, false);
    for (std::size_t c = 0; c < nstruct_; ++c) {
      const auto& col = columns_[c];
      const bool split = !std::isfinite(p_.lower[col.var]) && !std::isfinite(p_.upper[col.var]);
      if (split) {
        sol.x[col.var] += col.sign * value[c];
        split_seen[col.var] = true;
      } else {
        sol.x[col.var] = col.offset + col.sign * value[c];
      }
    }
    const double flip = p_.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    sol.duals.assign(p_.rows.size(), 0.0);
    for (std::size_t r = 0; r < p_.rows.size(); ++r) {
      double y = -obj_[identity_start_ + r];
      if (flipped_[r]) y = -y;
      sol.duals[r] = flip * y;
    }
    sol.reduced_costs = p_.objective;
    double dual = 0.0;
    for (std::size_t r = 0; r < p_.rows.size(); ++r) {
      dual += sol.duals[r] * p_.rows[r].rhs;
      for (const auto& [j, a] : p_.rows[r].coeffs) sol.reduced_costs[j] -= sol.duals[r] * a;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double d = sol.reduced_costs[j];
      const bool toward_lower = (d > 0) == (p_.sense == ObjectiveSense::kMinimize);
      const double bound = toward_lower ? p_.lower[j] : p_.upper[j];
      dual += d * (std::isfinite(bound) ? bound : sol.x[j]);
    }
    sol.dual_objective = dual;
    sol.objective = p_.Evaluate(sol.x);
    sol.basis.assign(basis_.begin(), basis_.end());
  }

  const LpProblem& p_;
  const SimplexOptions& opt_;
  std::vector<Column> columns_;
  std::size_t m_ = 0, nstruct_ = 0, nsurplus_ = 0, identity_start_ = 0, ncol_ = 0;
  std::vector<double> t_, rhs_, obj_;
  double objval_ = 0.0;
  double rhs_scale_ = 0.0;
  std::vector<int> basis_;
  std::vector<bool> artificial_;
  std::vector<std::size_t> artificial_rows_;
  std::vector<bool> flipped_;
  std::vector<std::size_t> nz_;
};

std::string NodeName(const char* prefix, NodeId i) { return std::string(prefix) + std::to_string(i); }
std::string PairName(const char* prefix, NodeId i, NodeId j) {
  return std::string(prefix) + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

LpSolution SimplexSolve(const LpProblem& problem, const SimplexOptions& options) {
  problem.Validate();
  Tableau tableau(problem, options);
  return tableau.Run();
}

LpProblem BuildDetectionLp(const Graph& g, int k, const NodeSet& w, const DetectionOptions& options) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t n = g.num_nodes();
  if (w.universe() != 0 && w.universe() != n) throw std::invalid_argument("interdiction set universe mismatch");
  LpProblem p;
  for (std::size_t i = 0; i < n; ++i) p.AddVariable(NodeName("u_", static_cast<NodeId>(i)), 1.0, 0.0, 1.0);
  const auto edges = g.Edges();
  std::vector<std::vector<std::pair<NodeId, int>>> incident(n);
  for (const auto& [i, j] : edges) {
    const int x = p.AddVariable(PairName("x_", i, j), 0.0, 0.0, options.x_upper ? 1.0 : kInfinity);
    incident[i].emplace_back(j, x);
    incident[j].emplace_back(i, x);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto deg = static_cast<double>(g.degree(static_cast<NodeId>(i)));
    std::vector<std::pair<int, double>> coeffs;
    coeffs.emplace_back(static_cast<int>(i), -(k - deg));
    for (const auto& [j, x] : incident[i]) {
      coeffs.emplace_back(j, 1.0);
      coeffs.emplace_back(x, -1.0);
    }
    std::sort(coeffs.begin(), coeffs.end());
    p.AddRow(NodeName("lin1_", static_cast<NodeId>(i)), std::move(coeffs), RowSense::kLessEqual, deg - k);
  }
  const std::size_t first_x = n;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    const int x = static_cast<int>(first_x + e);
    p.AddRow(PairName("lin2_", i, j), {{i, -1.0}, {x, 1.0}}, RowSense::kLessEqual, 0.0);
    p.AddRow(PairName("lin3_", i, j), {{j, -1.0}, {x, 1.0}}, RowSense::kLessEqual, 0.0);
    if (options.mccormick_lower) {
      p.AddRow(PairName("mccormick_", i, j), {{i, -1.0}, {j, -1.0}, {x, 1.0}}, RowSense::kGreaterEqual, -1.0);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.universe() == 0 ? 0.0 : (w.contains(static_cast<NodeId>(i)) ? 1.0 : 0.0);
    p.AddRow(NodeName("lin4_", static_cast<NodeId>(i)), {{static_cast<int>(i), 1.0}}, RowSense::kGreaterEqual, wi);
  }
  return p;
}

LpProblem BuildDetectionLp(const Graph& g, int k, const DetectionOptions& options) {
  return BuildDetectionLp(g, k, NodeSet(), options);
}

LpProblem BuildDual(const Graph& g, int k, const NodeSet& w) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::size_t n = g.num_nodes();
  if (w.universe() != n) throw std::invalid_argument("interdiction set universe mismatch");
  LpProblem p;
  p.sense = ObjectiveSense::kMaximize;
  std::vector<int> alpha(n), lambda(n), tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<NodeId>(i);
    alpha[i] = p.AddVariable(NodeName("alpha_", v), k - static_cast<double>(g.degree(v)), 0.0, kInfinity);
  }
  // Ordered pairs (i, j), j in N(i), in adjacency order.
  std::vector<std::vector<int>> beta(n), gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) {
      beta[i].push_back(p.AddVariable(PairName("beta_", static_cast<NodeId>(i), j), 0.0, 0.0, kInfinity));
      gamma[i].push_back(p.AddVariable(PairName("gamma_", static_cast<NodeId>(i), j), 0.0, 0.0, kInfinity));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<NodeId>(i);
    lambda[i] = p.AddVariable(NodeName("lambda_", v), w.contains(v) ? 1.0 : 0.0, 0.0, kInfinity);
  }
  for (std::size_t i = 0; i < n; ++i) tau[i] = p.AddVariable(NodeName("tau_", static_cast<NodeId>(i)), -1.0, 0.0, kInfinity);

  auto position = [&](NodeId i, NodeId j) {
    const auto nb = g.neighbors(i);
    return static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), j) - nb.begin());
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<NodeId>(i);
    std::vector<std::pair<int, double>> coeffs;
    coeffs.emplace_back(alpha[i], k - static_cast<double>(g.degree(v)));
    coeffs.emplace_back(lambda[i], 1.0);
    coeffs.emplace_back(tau[i], -1.0);
    const auto nb = g.neighbors(v);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      const NodeId j = nb[t];
      coeffs.emplace_back(alpha[j], -1.0);
      coeffs.emplace_back(beta[i][t], 1.0);
      coeffs.emplace_back(gamma[j][position(j, v)], 1.0);
    }
    std::sort(coeffs.begin(), coeffs.end());
    p.AddRow(NodeName("dual1_", v), std::move(coeffs), RowSense::kLessEqual, 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = g.neighbors(static_cast<NodeId>(i));
    for (std::size_t t = 0; t < nb.size(); ++t) {
      p.AddRow(PairName("dual2_", static_cast<NodeId>(i), nb[t]),
               {{alpha[i], 1.0}, {beta[i][t], -1.0}, {gamma[i][t], -1.0}}, RowSense::kLessEqual, 0.0);
    }
  }
  return p;
}

std::vector<double> NodeValues(const LpProblem& problem, const LpSolution& solution) {
  std::vector<std::pair<long, double>> found;
  for (std::size_t j = 0; j < problem.num_vars(); ++j) {
    const auto& name = problem.names[j];
    if (name.size() < 3 || name.compare(0, 2, "u_") != 0) continue;
    if (name.find_first_not_of("0123456789", 2) != std::string::npos) continue;
    found.emplace_back(std::stol(name.substr(2)), solution.x.at(j));
  }
  std::sort(found.begin(), found.end());
  std::vector<double> out;
  for (const auto& [i, v] : found) out.push_back(v);
  return out;
}

bool VerifyIntegrality(const LpProblem& problem, const LpSolution& solution, double tol) {
  if (solution.status != LpStatus::kOptimal) return false;
  for (double v : NodeValues(problem, solution))
    if (std::min(std::abs(v), std::abs(v - 1.0)) > tol) return false;
  return true;
}

}  // namespace ckc
