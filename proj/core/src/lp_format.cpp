#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rsp/solver.hpp"

namespace rsp::solver {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_terms(std::ostringstream& out, const std::vector<Term>& terms) {
  for (const Term& t : terms) {
    out << (t.coef < 0.0 ? " - " : " + ") << num(std::fabs(t.coef)) << " x" << t.var;
  }
}

}  // namespace

std::string write_lp_format(const LinearModel& model) {
  std::ostringstream out;
  out << "\\ canonical names: x{j} variables, c{i} rows\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    if (!model.var_name(j).empty()) out << "\\ x" << j << " = " << model.var_name(j) << "\n";
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    if (!model.row_name(i).empty()) out << "\\ c" << i << " = " << model.row_name(i) << "\n";
  }

  out << (model.obj_sense() == ObjSense::minimize ? "Minimize\n" : "Maximize\n");
  out << " obj:";
  bool any = false;
  for (int j = 0; j < model.num_vars(); ++j) {
    const double c = model.obj_coef(j);
    if (c == 0.0) continue;
    out << (c < 0.0 ? " - " : " + ") << num(std::fabs(c)) << " x" << j;
    any = true;
  }
  if (model.obj_constant() != 0.0) {
    const double c = model.obj_constant();
    out << (c < 0.0 ? " - " : " + ") << num(std::fabs(c));
    any = true;
  }
  if (!any) out << " 0";
  out << "\n";

  out << "Subject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    out << " c" << i << ":";
    const auto& terms = model.row_terms(i);
    if (terms.empty()) out << " 0";
    else {
      std::ostringstream row;
      append_terms(row, terms);
      out << row.str();
    }
    switch (model.row_sense(i)) {
      case Sense::le: out << " <= "; break;
      case Sense::ge: out << " >= "; break;
      case Sense::eq: out << " = "; break;
    }
    out << num(model.row_rhs(i)) << "\n";
  }

  out << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const double lo = model.var_lo(j), hi = model.var_hi(j);
    if (lo == -kInf && hi == kInf) out << " x" << j << " free\n";
    else if (lo == -kInf) out << " -infinity <= x" << j << " <= " << num(hi) << "\n";
    else if (hi == kInf) out << " x" << j << " >= " << num(lo) << "\n";
    else out << " " << num(lo) << " <= x" << j << " <= " << num(hi) << "\n";
  }

  bool have_general = false, have_binary = false;
  for (int j = 0; j < model.num_vars(); ++j) {
    have_general |= model.var_kind(j) == VarKind::integer;
    have_binary |= model.var_kind(j) == VarKind::binary;
  }
  if (have_general) {
    out << "General\n";
    for (int j = 0; j < model.num_vars(); ++j)
      if (model.var_kind(j) == VarKind::integer) out << " x" << j << "\n";
  }
  if (have_binary) {
    out << "Binary\n";
    for (int j = 0; j < model.num_vars(); ++j)
      if (model.var_kind(j) == VarKind::binary) out << " x" << j << "\n";
  }
  out << "End\n";
  return out.str();
}

void write_lp_file(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << write_lp_format(model);
  if (!out.flush()) throw IoError("failed writing " + path);
}

}  // namespace rsp::solver
