#include <algorithm>
#include <cmath>

#include "rsp/solver.hpp"

namespace rsp::solver {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::limit: return "limit";
  }
  return "unknown";
}

VarRef LinearModel::add_var(const std::string& name, double lo, double hi, VarKind kind,
                            double obj_coef) {
  if (kind == VarKind::binary) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
  }
  if (lo > hi) throw DomainError("add_var: lo > hi for " + name);
  var_names_.push_back(name);
  var_lo_.push_back(lo);
  var_hi_.push_back(hi);
  var_kind_.push_back(kind);
  obj_.push_back(obj_coef);
  if (kind != VarKind::continuous) ++integer_count_;
  return {num_vars() - 1};
}

int LinearModel::add_row(const std::string& name, const LinExpr& expr, Sense sense, double rhs) {
  std::vector<Term> terms = expr.terms;
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) throw DomainError("add_row: undeclared variable");
    if (!std::isfinite(t.coef)) throw DomainError("add_row: non-finite coefficient in " + name);
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  row_names_.push_back(name);
  rows_.push_back(std::move(merged));
  row_sense_.push_back(sense);
  row_rhs_.push_back(rhs - expr.constant);
  return num_rows() - 1;
}

void LinearModel::set_obj_coef(VarRef v, double coef) {
  obj_[v.index] = coef;
}

double max_violation(const LinearModel& model, const std::vector<double>& values) {
  double worst = 0.0;
  for (int j = 0; j < model.num_vars(); ++j) {
    worst = std::max(worst, model.var_lo(j) - values[j]);
    worst = std::max(worst, values[j] - model.var_hi(j));
    if (model.var_kind(j) != VarKind::continuous)
      worst = std::max(worst, std::fabs(values[j] - std::round(values[j])));
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    double a = 0.0;
    for (const Term& t : model.row_terms(i)) a += t.coef * values[t.var];
    const double rhs = model.row_rhs(i);
    switch (model.row_sense(i)) {
      case Sense::le: worst = std::max(worst, a - rhs); break;
      case Sense::ge: worst = std::max(worst, rhs - a); break;
      case Sense::eq: worst = std::max(worst, std::fabs(a - rhs)); break;
    }
  }
  return worst;
}

}  // namespace rsp::solver
