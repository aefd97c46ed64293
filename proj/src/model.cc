#include "ckc/model.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ckc/bounds.h"
#include "ckc/solver.h"

namespace ckc {

namespace {

std::string Indexed(const char* prefix, long long i) { return std::string(prefix) + std::to_string(i); }
std::string Indexed(const char* prefix, long long i, long long t) {
  return Indexed(prefix, i) + "_" + std::to_string(t);
}

std::string FormatNumber(double x) {
  if (x == kInfinity) return "inf";
  if (x == -kInfinity) return "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

const char* SenseToken(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kGreaterEqual: return ">=";
    case RowSense::kEqual: return "=";
  }
  return "=";
}

bool IsIntegral(double x) { return std::isfinite(x) && x == std::floor(x); }

double ToDouble(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Cut on w rewritten over a^0 = 1 - w: sum c_i w_i ~ r  becomes
// -sum c_i a_i ~ r - sum c_i.
ModelRow CutOverA0(const Cut& cut, const std::vector<int>& a0, std::string name) {
  if (cut.z_coeff != Rational(0)) throw std::invalid_argument("cut with a z term has no a^0 form");
  ModelRow row;
  row.name = std::move(name);
  Rational rhs = cut.rhs;
  for (const auto& [v, c] : cut.coeffs) {
    row.coeffs.emplace_back(a0[v], -ToDouble(c));
    rhs -= c;
  }
  row.rhs = ToDouble(rhs);
  row.sense = cut.sense == Sense::kGreaterEqual ? RowSense::kGreaterEqual : RowSense::kLessEqual;
  return row;
}

}  // namespace

int ModelIR::AddVar(std::string var_name, VarKind kind, double lo, double hi) {
  if (index_.count(var_name)) throw std::invalid_argument("duplicate variable " + var_name);
  if (kind == VarKind::kBinary) {
    lo = 0.0;
    hi = 1.0;
  }
  const int id = static_cast<int>(vars.size());
  index_.emplace(var_name, id);
  vars.push_back({std::move(var_name), kind, lo, hi});
  return id;
}

void ModelIR::AddRow(ModelRow row) {
  if (!row_names_.insert(row.name).second) throw std::invalid_argument("duplicate row " + row.name);
  rows.push_back(std::move(row));
}

int ModelIR::Index(const std::string& var_name) const {
  auto it = index_.find(var_name);
  if (it == index_.end()) throw std::out_of_range("unknown variable " + var_name);
  return it->second;
}

bool ModelIR::IsLinear() const {
  if (!objective_bilinear.empty()) return false;
  for (const auto& r : rows) {
    if (!r.bilinear.empty()) return false;
  }
  return true;
}

std::size_t ModelIR::CountRowsWithPrefix(const std::string& prefix) const {
  std::size_t count = 0;
  for (const auto& r : rows) count += r.name.compare(0, prefix.size(), prefix) == 0;
  return count;
}

std::string ModelIR::ToJson() const {
  using nlohmann::json;
  auto bound = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  auto kind_name = [](VarKind k) {
    return k == VarKind::kBinary ? "binary" : k == VarKind::kInteger ? "integer" : "continuous";
  };
  auto terms = [this](const std::vector<std::pair<int, double>>& coeffs) {
    json out = json::array();
    for (const auto& [v, c] : coeffs) out.push_back({vars[v].name, c});
    return out;
  };
  auto bilinear = [this](const std::vector<BilinearTerm>& list) {
    json out = json::array();
    for (const auto& t : list) out.push_back({vars[t.first].name, vars[t.second].name, t.coeff});
    return out;
  };
  json j;
  j["name"] = name;
  j["sense"] = sense == ObjectiveSense::kMinimize ? "minimize" : "maximize";
  j["linear"] = IsLinear();
  json jv = json::array();
  for (const auto& v : vars) jv.push_back({{"name", v.name}, {"kind", kind_name(v.kind)}, {"lb", bound(v.lower)}, {"ub", bound(v.upper)}});
  j["vars"] = jv;
  json jr = json::array();
  for (const auto& r : rows) {
    jr.push_back({{"name", r.name}, {"coeffs", terms(r.coeffs)}, {"bilinear", bilinear(r.bilinear)},
                  {"sense", SenseToken(r.sense)}, {"rhs", r.rhs}});
  }
  j["rows"] = jr;
  j["objective"] = {{"linear", terms(objective)}, {"bilinear", bilinear(objective_bilinear)}, {"constant", objective_constant}};
  return j.dump();
}

ModelIR EmitTimeDependent(const Instance& inst, const TimeDependentOptions& options) {
  const Graph& g = inst.graph;
  const int n = static_cast<int>(inst.n());
  const BoundInfo bounds = LowerBoundM(inst);
  const int horizon = std::max(0, n - inst.b - bounds.m);

  ModelIR ir;
  ir.name = (inst.name.empty() ? std::string("instance") : inst.name) + "_td";
  std::vector<std::vector<int>> a(n, std::vector<int>(horizon + 1));
  for (int t = 0; t <= horizon; ++t) {
    for (int i = 0; i < n; ++i) a[i][t] = ir.AddVar(Indexed("a_", i, t), VarKind::kBinary);
  }
  for (int i = 0; i < n; ++i) ir.objective.emplace_back(a[i][horizon], 1.0);

  ModelRow budget{"budget", {}, {}, RowSense::kEqual, static_cast<double>(n - inst.b)};
  for (int i = 0; i < n; ++i) budget.coeffs.emplace_back(a[i][0], 1.0);
  ir.AddRow(std::move(budget));

  for (int t = 1; t <= horizon; ++t) {
    for (int i = 0; i < n; ++i) {
      ir.AddRow({Indexed("onlyremoval_", i, t), {{a[i][t], 1.0}, {a[i][t - 1], -1.0}}, {}, RowSense::kLessEqual, 0.0});
    }
  }
  // sum_{j in N(i)} a_j^{t-1} - d a_i^t + d a_i^0 <= d + k - 1, d = |N(i)| - k + 1.
  for (int t = 1; t <= horizon; ++t) {
    for (int i = 0; i < n; ++i) {
      const double d = static_cast<double>(g.degree(i)) - inst.k + 1;
      ModelRow row{Indexed("const_one_", i, t), {}, {}, RowSense::kLessEqual, d + inst.k - 1};
      for (NodeId j : g.neighbors(i)) row.coeffs.emplace_back(a[j][t - 1], 1.0);
      row.coeffs.emplace_back(a[i][t], -d);
      row.coeffs.emplace_back(a[i][0], d);
      ir.AddRow(std::move(row));
    }
  }

  if (options.with_cuts) {
    std::vector<int> a0(n);
    for (int i = 0; i < n; ++i) a0[i] = a[i][0];
    const FollowersTable table = ComputeFollowersTable(inst);
    int index = 0;
    for (const Cut& cut : DominanceCuts(table)) ir.AddRow(CutOverA0(cut, a0, Indexed("dominance_", index++)));
    index = 0;
    for (const Cut& cut : SymmetryCuts(table)) ir.AddRow(CutOverA0(cut, a0, Indexed("symmetry_", index++)));
    if (FollowerAssumptionHolds(inst)) {
      for (const Cut& cut : FollowerCuts(inst, table).cuts) {
        ir.AddRow(CutOverA0(cut, a0, Indexed("follower_", cut.provenance.empty() ? index++ : cut.provenance.front())));
      }
    }
    ModelRow lower{"lower_bound", {}, {}, RowSense::kGreaterEqual, static_cast<double>(bounds.m)};
    for (int i = 0; i < n; ++i) lower.coeffs.emplace_back(a[i][horizon], 1.0);
    ir.AddRow(std::move(lower));
  }
  return ir;
}

ModelIR EmitSparseMaster(const Instance& inst, const CutPool& pool) {
  const int n = static_cast<int>(inst.n());
  const int m = LowerBoundM(inst).m;
  ModelIR ir;
  ir.name = (inst.name.empty() ? std::string("instance") : inst.name) + "_sparse";
  std::vector<int> w(n);
  for (int i = 0; i < n; ++i) w[i] = ir.AddVar(Indexed("w_", i), VarKind::kBinary);
  const int z = ir.AddVar("z", VarKind::kInteger, m, kInfinity);
  ir.objective.emplace_back(z, 1.0);

  ModelRow budget{"budget", {}, {}, RowSense::kEqual, static_cast<double>(inst.b)};
  for (int i = 0; i < n; ++i) budget.coeffs.emplace_back(w[i], 1.0);
  ir.AddRow(std::move(budget));
  ir.AddRow({"z_lower", {{z, 1.0}}, {}, RowSense::kGreaterEqual, static_cast<double>(m)});

  std::vector<int> seen(kNumCutKinds, 0);
  for (const Cut& cut : pool.cuts()) {
    std::int64_t scale = cut.z_coeff.denominator();
    scale = std::lcm(scale, cut.rhs.denominator());
    for (const auto& [v, c] : cut.coeffs) scale = std::lcm(scale, c.denominator());
    ModelRow row;
    row.name = std::string(CutKindName(cut.kind)) + "_" + std::to_string(seen[static_cast<int>(cut.kind)]++);
    for (const auto& [v, c] : cut.coeffs) row.coeffs.emplace_back(w[v], ToDouble(c * scale));
    if (cut.z_coeff != Rational(0)) row.coeffs.emplace_back(z, ToDouble(cut.z_coeff * scale));
    row.sense = cut.sense == Sense::kGreaterEqual ? RowSense::kGreaterEqual : RowSense::kLessEqual;
    row.rhs = ToDouble(cut.rhs * scale);
    ir.AddRow(std::move(row));
  }
  return ir;
}

ModelIR EmitNonlinearDual(const Instance& inst, const NonlinearDualOptions& options) {
  const int n = static_cast<int>(inst.n());
  const int m = LowerBoundM(inst).m;
  const LpProblem dual = BuildDual(inst.graph, inst.k, NodeSet(inst.n()));

  ModelIR ir;
  ir.name = (inst.name.empty() ? std::string("instance") : inst.name) + (options.linearize ? "_dual_lin" : "_dual");
  std::vector<int> w(n);
  for (int i = 0; i < n; ++i) w[i] = ir.AddVar(Indexed("w_", i), VarKind::kBinary);
  const int v = ir.AddVar("v", VarKind::kInteger, 0.0, static_cast<double>(n - m));
  const double big = options.big_m > 0.0 ? options.big_m : static_cast<double>(n);
  std::vector<int> dual_index(dual.num_vars());
  for (std::size_t c = 0; c < dual.num_vars(); ++c) {
    const bool is_lambda = dual.names[c].compare(0, 7, "lambda_") == 0;
    dual_index[c] = ir.AddVar(dual.names[c], VarKind::kContinuous, dual.lower[c],
                              options.linearize && is_lambda ? big : dual.upper[c]);
  }
  std::vector<int> p(n, -1);
  if (options.linearize) {
    for (int i = 0; i < n; ++i) p[i] = ir.AddVar(Indexed("p_", i), VarKind::kContinuous, 0.0, kInfinity);
  }
  ir.objective.emplace_back(v, -1.0);
  ir.objective_constant = n;

  // v - sum (k - |N(i)|) alpha_i - sum w_i lambda_i + sum tau_i <= 0
  ModelRow nonlin{"nonlin", {{v, 1.0}}, {}, RowSense::kLessEqual, 0.0};
  for (int i = 0; i < n; ++i) {
    const int alpha = ir.Index(Indexed("alpha_", i));
    const int lambda = ir.Index(Indexed("lambda_", i));
    const int tau = ir.Index(Indexed("tau_", i));
    const double coeff = inst.k - static_cast<double>(inst.graph.degree(i));
    nonlin.coeffs.emplace_back(alpha, -coeff);
    if (options.linearize) {
      nonlin.coeffs.emplace_back(p[i], -1.0);
    } else {
      nonlin.bilinear.push_back({w[i], lambda, -1.0});
    }
    nonlin.coeffs.emplace_back(tau, 1.0);
  }
  ir.AddRow(std::move(nonlin));

  ModelRow budget{"budget", {}, {}, RowSense::kEqual, static_cast<double>(inst.b)};
  for (int i = 0; i < n; ++i) budget.coeffs.emplace_back(w[i], 1.0);
  ir.AddRow(std::move(budget));

  for (const LpRow& row : dual.rows) {
    ModelRow out{row.name, {}, {}, row.sense, row.rhs};
    for (const auto& [c, value] : row.coeffs) out.coeffs.emplace_back(dual_index[c], value);
    ir.AddRow(std::move(out));
  }

  if (options.linearize) {
    for (int i = 0; i < n; ++i) {
      const int lambda = ir.Index(Indexed("lambda_", i));
      ir.AddRow({Indexed("mc_upper_w_", i), {{p[i], 1.0}, {w[i], -big}}, {}, RowSense::kLessEqual, 0.0});
      ir.AddRow({Indexed("mc_upper_lambda_", i), {{p[i], 1.0}, {lambda, -1.0}}, {}, RowSense::kLessEqual, 0.0});
      // p_i >= lambda_i - big (1 - w_i)
      ir.AddRow({Indexed("mc_lower_", i), {{p[i], 1.0}, {lambda, -1.0}, {w[i], -big}}, {}, RowSense::kGreaterEqual, -big});
    }
  }
  return ir;
}

ModelIR FromLpProblem(const LpProblem& problem, const std::string& name) {
  problem.Validate();
  ModelIR ir;
  ir.name = name;
  ir.sense = problem.sense;
  for (std::size_t c = 0; c < problem.num_vars(); ++c) {
    ir.AddVar(problem.names[c], VarKind::kContinuous, problem.lower[c], problem.upper[c]);
    if (problem.objective[c] != 0.0) ir.objective.emplace_back(static_cast<int>(c), problem.objective[c]);
  }
  for (const LpRow& row : problem.rows) ir.AddRow({row.name, row.coeffs, {}, row.sense, row.rhs});
  return ir;
}

ModelIR EmitDetectionLp(const Graph& g, int k, const NodeSet& w) {
  return FromLpProblem(BuildDetectionLp(g, k, w), "detection_k" + std::to_string(k));
}

std::string WriteLpText(const ModelIR& model) {
  if (!model.IsLinear()) throw std::invalid_argument("bilinear terms must be linearized before writing LP text");
  for (const auto& r : model.rows) {
    if (r.coeffs.empty()) throw std::invalid_argument("row " + r.name + " has no terms");
  }
  std::ostringstream out;
  auto write_terms = [&](const std::vector<std::pair<int, double>>& coeffs) {
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      if (t > 0 && t % 8 == 0) out << "\n  ";
      const double c = coeffs[t].second;
      if (t == 0) {
        out << ' ' << (c < 0 ? "- " : "") << FormatNumber(std::fabs(c));
      } else {
        out << (c < 0 ? " - " : " + ") << FormatNumber(std::fabs(c));
      }
      out << ' ' << model.vars[coeffs[t].first].name;
    }
  };

  out << "\\ Problem name: " << model.name << "\n";
  out << (model.sense == ObjectiveSense::kMinimize ? "Minimize" : "Maximize") << "\n obj:";
  write_terms(model.objective);
  if (model.objective_constant != 0.0 || model.objective.empty()) {
    const double c = model.objective_constant;
    out << (c < 0 ? " - " : model.objective.empty() ? " " : " + ") << FormatNumber(std::fabs(c));
  }
  out << "\nSubject To\n";
  for (const auto& r : model.rows) {
    out << ' ' << r.name << ':';
    write_terms(r.coeffs);
    out << ' ' << SenseToken(r.sense) << ' ' << FormatNumber(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.vars) {
    out << ' ';
    if (v.lower == v.upper) {
      out << v.name << " = " << FormatNumber(v.lower);
    } else if (v.lower == -kInfinity && v.upper == kInfinity) {
      out << v.name << " free";
    } else if (v.upper == kInfinity) {
      out << v.name << " >= " << FormatNumber(v.lower);
    } else {
      out << FormatNumber(v.lower) << " <= " << v.name << " <= " << FormatNumber(v.upper);
    }
    out << "\n";
  }
  auto write_kind = [&](const char* header, VarKind kind) {
    out << header << "\n";
    int on_line = 0;
    for (const auto& v : model.vars) {
      if (v.kind != kind) continue;
      if (on_line == 8) {
        out << "\n";
        on_line = 0;
      }
      out << ' ' << v.name;
      ++on_line;
    }
    if (on_line > 0) out << "\n";
  };
  write_kind("Generals", VarKind::kInteger);
  write_kind("Binaries", VarKind::kBinary);
  out << "End\n";
  return out.str();
}

namespace {

struct Token {
  std::string text;
  std::size_t line;
};

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<double> ParseNumber(const std::string& s) {
  const std::string low = Lower(s);
  if (low == "inf" || low == "+inf" || low == "infinity" || low == "+infinity") return kInfinity;
  if (low == "-inf" || low == "-infinity") return -kInfinity;
  double value = 0.0;
  const char* begin = s.data();
  if (!s.empty() && s[0] == '+') ++begin;
  auto res = std::from_chars(begin, s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool IsSenseToken(const std::string& s) { return s == "<=" || s == ">=" || s == "=" || s == "=<" || s == "=>"; }

RowSense ParseSense(const std::string& s) {
  if (s == "<=" || s == "=<") return RowSense::kLessEqual;
  if (s == ">=" || s == "=>") return RowSense::kGreaterEqual;
  return RowSense::kEqual;
}

enum class Section { kNone, kObjective, kConstraints, kBounds, kGenerals, kBinaries, kEnd };

}  // namespace

ModelIR ParseLpText(const std::string& text) {
  ModelIR ir;
  std::vector<Token> objective_tokens, row_tokens, bound_tokens, general_tokens, binary_tokens;
  Section section = Section::kNone;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '\\') {
      static const std::string kNameTag = "\\ Problem name: ";
      if (line.compare(first, kNameTag.size(), kNameTag) == 0) {
        ir.name = line.substr(first + kNameTag.size());
        while (!ir.name.empty() && (ir.name.back() == '\r' || ir.name.back() == ' ')) ir.name.pop_back();
      }
      continue;
    }
    if (line.find('[') != std::string::npos) throw ParseError(line_no, "quadratic terms are not supported");
    std::string trimmed = line.substr(first);
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.pop_back();
    const std::string low = Lower(trimmed);
    if (low == "minimize" || low == "minimum" || low == "min") {
      ir.sense = ObjectiveSense::kMinimize;
      section = Section::kObjective;
      continue;
    }
    if (low == "maximize" || low == "maximum" || low == "max") {
      ir.sense = ObjectiveSense::kMaximize;
      section = Section::kObjective;
      continue;
    }
    if (low == "subject to" || low == "such that" || low == "st" || low == "s.t.") {
      section = Section::kConstraints;
      continue;
    }
    if (low == "bounds" || low == "bound") {
      section = Section::kBounds;
      continue;
    }
    if (low == "generals" || low == "general" || low == "gen") {
      section = Section::kGenerals;
      continue;
    }
    if (low == "binaries" || low == "binary" || low == "bin") {
      section = Section::kBinaries;
      continue;
    }
    if (low == "end") {
      section = Section::kEnd;
      continue;
    }
    std::vector<Token>* sink = nullptr;
    switch (section) {
      case Section::kObjective: sink = &objective_tokens; break;
      case Section::kConstraints: sink = &row_tokens; break;
      case Section::kBounds: sink = &bound_tokens; break;
      case Section::kGenerals: sink = &general_tokens; break;
      case Section::kBinaries: sink = &binary_tokens; break;
      case Section::kNone: throw ParseError(line_no, "content before the objective section");
      case Section::kEnd: throw ParseError(line_no, "content after End");
    }
    std::istringstream words(trimmed);
    std::string word;
    while (words >> word) sink->push_back({word, line_no});
  }
  if (section != Section::kEnd) throw ParseError(line_no, "missing End");

  // Bounds fix the variable order: one entry per variable.
  std::vector<double> lower, upper;
  for (std::size_t p = 0; p < bound_tokens.size();) {
    const Token& t0 = bound_tokens[p];
    auto need = [&](std::size_t q) -> const Token& {
      if (q >= bound_tokens.size()) throw ParseError(t0.line, "truncated bound");
      return bound_tokens[q];
    };
    double lo = 0.0, hi = kInfinity;
    std::string name;
    if (auto value = ParseNumber(t0.text)) {
      if (need(p + 1).text != "<=" || need(p + 3).text != "<=") throw ParseError(t0.line, "expected lo <= x <= hi");
      name = need(p + 2).text;
      auto up = ParseNumber(need(p + 4).text);
      if (!up) throw ParseError(t0.line, "bad upper bound");
      lo = *value;
      hi = *up;
      p += 5;
    } else {
      name = t0.text;
      const std::string op = Lower(need(p + 1).text);
      if (op == "free") {
        lo = -kInfinity;
        p += 2;
      } else {
        auto value2 = ParseNumber(need(p + 2).text);
        if (!value2) throw ParseError(t0.line, "bad bound value");
        if (op == "=") {
          lo = hi = *value2;
        } else if (op == ">=") {
          lo = *value2;
        } else if (op == "<=") {
          hi = *value2;
        } else {
          throw ParseError(t0.line, "unknown bound operator " + op);
        }
        p += 3;
      }
    }
    try {
      ir.AddVar(name, VarKind::kContinuous, lo, hi);
    } catch (const std::invalid_argument&) {
      throw ParseError(t0.line, "variable bounded twice: " + name);
    }
  }
  auto lookup = [&](const Token& t) {
    try {
      return ir.Index(t.text);
    } catch (const std::out_of_range&) {
      throw ParseError(t.line, "variable without bounds entry: " + t.text);
    }
  };
  for (const Token& t : general_tokens) ir.vars[lookup(t)].kind = VarKind::kInteger;
  for (const Token& t : binary_tokens) {
    ModelVar& var = ir.vars[lookup(t)];
    var.kind = VarKind::kBinary;
    var.lower = 0.0;
    var.upper = 1.0;
  }

  // Linear expression: [sign] number name ... until a sense token or the end
  // of the token range. A trailing number without a name is a constant.
  auto parse_expression = [&](const std::vector<Token>& tokens, std::size_t& p, std::size_t end,
                              std::vector<std::pair<int, double>>& coeffs, double* constant) {
    while (p < end && !IsSenseToken(tokens[p].text)) {
      double sign = 1.0;
      if (tokens[p].text == "+" || tokens[p].text == "-") {
        sign = tokens[p].text == "-" ? -1.0 : 1.0;
        ++p;
        if (p >= end) throw ParseError(tokens[p - 1].line, "dangling sign");
      }
      double coeff = 1.0;
      if (auto value = ParseNumber(tokens[p].text)) {
        coeff = *value;
        ++p;
        if (p >= end || IsSenseToken(tokens[p].text) || tokens[p].text == "+" || tokens[p].text == "-") {
          if (constant == nullptr) throw ParseError(tokens[p - 1].line, "constant term in a row");
          *constant += sign * coeff;
          continue;
        }
      }
      coeffs.emplace_back(lookup(tokens[p]), sign * coeff);
      ++p;
    }
  };

  std::size_t p = 0;
  if (!objective_tokens.empty()) {
    if (objective_tokens[0].text.back() == ':') p = 1;
    parse_expression(objective_tokens, p, objective_tokens.size(), ir.objective, &ir.objective_constant);
  }

  p = 0;
  while (p < row_tokens.size()) {
    const Token& head = row_tokens[p];
    if (head.text.size() < 2 || head.text.back() != ':') throw ParseError(head.line, "rows need a name");
    ModelRow row;
    row.name = head.text.substr(0, head.text.size() - 1);
    ++p;
    parse_expression(row_tokens, p, row_tokens.size(), row.coeffs, nullptr);
    if (p + 1 >= row_tokens.size()) throw ParseError(head.line, "row without sense or rhs");
    row.sense = ParseSense(row_tokens[p].text);
    auto rhs = ParseNumber(row_tokens[p + 1].text);
    if (!rhs) throw ParseError(row_tokens[p + 1].line, "bad right-hand side");
    row.rhs = *rhs;
    p += 2;
    try {
      ir.AddRow(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw ParseError(head.line, e.what());
    }
  }
  return ir;
}

ModelCheck EvaluateModel(const ModelIR& model, const Assignment& values) {
  std::vector<std::string> missing;
  std::vector<double> x(model.vars.size());
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    auto it = values.find(model.vars[i].name);
    if (it == values.end()) {
      missing.push_back(model.vars[i].name);
    } else {
      x[i] = it->second;
    }
  }
  if (!missing.empty()) {
    std::string msg = "assignment misses variables:";
    for (const auto& name : missing) msg += " " + name;
    throw std::invalid_argument(msg);
  }

  ModelCheck check;
  auto fail = [&](std::string what) {
    check.feasible = false;
    check.violations.push_back(std::move(what));
  };
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    const ModelVar& var = model.vars[i];
    if (var.kind != VarKind::kContinuous && !IsIntegral(x[i])) fail(var.name + " = " + FormatNumber(x[i]) + " is not integral");
    const double tol = var.kind == VarKind::kContinuous ? 1e-9 * (1.0 + std::fabs(x[i])) : 0.0;
    if (x[i] < var.lower - tol || x[i] > var.upper + tol) {
      fail(var.name + " = " + FormatNumber(x[i]) + " outside [" + FormatNumber(var.lower) + ", " + FormatNumber(var.upper) + "]");
    }
  }
  for (const ModelRow& row : model.rows) {
    bool integer_row = IsIntegral(row.rhs);
    double lhs = 0.0, magnitude = std::fabs(row.rhs);
    for (const auto& [v, c] : row.coeffs) {
      integer_row = integer_row && IsIntegral(c) && model.vars[v].kind != VarKind::kContinuous;
      lhs += c * x[v];
      magnitude += std::fabs(c * x[v]);
    }
    for (const BilinearTerm& t : row.bilinear) {
      integer_row = integer_row && IsIntegral(t.coeff) && model.vars[t.first].kind != VarKind::kContinuous &&
                    model.vars[t.second].kind != VarKind::kContinuous;
      lhs += t.coeff * x[t.first] * x[t.second];
      magnitude += std::fabs(t.coeff * x[t.first] * x[t.second]);
    }
    const double tol = integer_row ? 0.0 : 1e-9 * (1.0 + magnitude);
    bool ok = true;
    switch (row.sense) {
      case RowSense::kLessEqual: ok = lhs <= row.rhs + tol; break;
      case RowSense::kGreaterEqual: ok = lhs >= row.rhs - tol; break;
      case RowSense::kEqual: ok = std::fabs(lhs - row.rhs) <= tol; break;
    }
    if (!ok) fail(row.name + ": " + FormatNumber(lhs) + " " + SenseToken(row.sense) + " " + FormatNumber(row.rhs) + " violated");
  }
  check.objective = model.objective_constant;
  for (const auto& [v, c] : model.objective) check.objective += c * x[v];
  for (const BilinearTerm& t : model.objective_bilinear) check.objective += t.coeff * x[t.first] * x[t.second];
  return check;
}

Assignment CascadeToAssignment(const Instance& inst, const NodeSet& w, int horizon) {
  if (static_cast<int>(w.size()) != inst.b) throw std::invalid_argument("interdiction set size differs from the budget");
  const CascadeTrace trace = Collapse(inst, w);
  if (trace.rounds > horizon) {
    throw std::length_error("cascade needs " + std::to_string(trace.rounds) + " rounds, horizon is " + std::to_string(horizon));
  }
  Assignment out;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto& removed = trace.removed_at[i];
    for (int t = 0; t <= horizon; ++t) {
      out[Indexed("a_", static_cast<long long>(i), t)] = removed && *removed <= t ? 0.0 : 1.0;
    }
  }
  return out;
}

Assignment DualAssignment(const Instance& inst, const NodeSet& w, const NonlinearDualOptions& options) {
  LpProblem dual = BuildDual(inst.graph, inst.k, w);
  if (options.linearize) {
    const double big = options.big_m > 0.0 ? options.big_m : static_cast<double>(inst.n());
    for (std::size_t c = 0; c < dual.num_vars(); ++c) {
      if (dual.names[c].compare(0, 7, "lambda_") == 0) dual.upper[c] = big;
    }
  }
  const LpSolution sol = SimplexSolve(dual);
  if (sol.status != LpStatus::kOptimal) throw std::runtime_error("dual LP not solved to optimality");
  Assignment out;
  for (std::size_t c = 0; c < dual.num_vars(); ++c) out[dual.names[c]] = sol.x[c];
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const double wi = w.contains(static_cast<NodeId>(i)) ? 1.0 : 0.0;
    out[Indexed("w_", static_cast<long long>(i))] = wi;
    if (options.linearize) out[Indexed("p_", static_cast<long long>(i))] = wi * out[Indexed("lambda_", static_cast<long long>(i))];
  }
  out["v"] = std::floor(sol.objective + 1e-7);
  return out;
}

}  // namespace ckc
