#pragma once

// Linear and mixed-integer linear optimization behind a backend-neutral
// model-building interface. The built-in reference implementation is a
// bounded-variable revised simplex (sparse LU basis with product-form
// updates, Dantzig pricing with a Bland fallback) plus a best-bound branch
// and bound. Sized for desk-scale instances; an external solver can be
// plugged in through the LP-format backend adapter.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rsp/common.hpp"

namespace rsp::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, integer, binary };
enum class Sense { le, eq, ge };
enum class ObjSense { minimize, maximize };
enum class SolveStatus { optimal, infeasible, unbounded, limit };

const char* to_string(SolveStatus s);

struct VarRef {
  int index = -1;
  bool valid() const { return index >= 0; }
};

struct Term {
  int var = -1;
  double coef = 0.0;
};

// Small linear-expression builder; duplicate variables are merged when the
// expression is attached to a model.
struct LinExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinExpr& add(VarRef v, double coef) {
    terms.push_back({v.index, coef});
    return *this;
  }
  LinExpr& operator+=(double c) {
    constant += c;
    return *this;
  }
};

class LinearModel {
 public:
  VarRef add_var(const std::string& name, double lo, double hi, VarKind kind = VarKind::continuous,
                 double obj_coef = 0.0);
  // Returns the row index.
  int add_row(const std::string& name, const LinExpr& expr, Sense sense, double rhs);
  void set_obj_coef(VarRef v, double coef);
  void set_obj_sense(ObjSense sense) { obj_sense_ = sense; }
  void set_obj_constant(double c) { obj_constant_ = c; }

  int num_vars() const { return static_cast<int>(var_lo_.size()); }
  int num_rows() const { return static_cast<int>(row_rhs_.size()); }
  bool has_integers() const { return integer_count_ > 0; }
  ObjSense obj_sense() const { return obj_sense_; }
  double obj_constant() const { return obj_constant_; }

  double var_lo(int j) const { return var_lo_[j]; }
  double var_hi(int j) const { return var_hi_[j]; }
  VarKind var_kind(int j) const { return var_kind_[j]; }
  double obj_coef(int j) const { return obj_[j]; }
  const std::string& var_name(int j) const { return var_names_[j]; }
  const std::string& row_name(int i) const { return row_names_[i]; }
  Sense row_sense(int i) const { return row_sense_[i]; }
  double row_rhs(int i) const { return row_rhs_[i]; }
  const std::vector<Term>& row_terms(int i) const { return rows_[i]; }

 private:
  std::vector<std::string> var_names_;
  std::vector<double> var_lo_, var_hi_, obj_;
  std::vector<VarKind> var_kind_;
  std::vector<std::string> row_names_;
  std::vector<std::vector<Term>> rows_;
  std::vector<Sense> row_sense_;
  std::vector<double> row_rhs_;
  ObjSense obj_sense_ = ObjSense::minimize;
  double obj_constant_ = 0.0;
  int integer_count_ = 0;
};

struct MipTrace {
  std::vector<double> popped_bounds;  // best-bound sequence, for tests
};

struct SolveOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double int_tol = 1e-6;
  long max_simplex_iters = 0;  // 0 = automatic (scales with model size)
  long max_bnb_nodes = 200000;
  double time_limit = 0.0;  // seconds, 0 = none
  MipTrace* trace = nullptr;
};

struct SolveResult {
  SolveStatus status = SolveStatus::limit;
  double objective = 0.0;
  std::vector<double> values;  // indexed by VarRef::index
  long iterations = 0;
  long nodes = 0;
  // Diagnostics for infeasible LPs: residual infeasibility and the phase-1
  // dual vector (Farkas-style certificate in row space).
  double infeasibility = 0.0;
  std::vector<double> farkas;
  // Optimal-basis duals (LP only): row duals y with c = A^T y + d and the
  // reduced costs d; empty after MIP solves.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;

  double value_of(VarRef v) const { return values[v.index]; }
};

// Reference simplex. Throws DomainError if the model has integer variables.
SolveResult solve_lp(const LinearModel& model, const SolveOptions& opts = {});

// Reference branch and bound (delegates to solve_lp when the model is pure).
SolveResult solve_mip(const LinearModel& model, const SolveOptions& opts = {});

// Residual check used internally after every optimal solve and exposed for
// tests: max constraint/bound/integrality violation of `values`.
double max_violation(const LinearModel& model, const std::vector<double>& values);

// CPLEX-style LP-format dump with canonical names x{j}/c{i}; original names
// appear as comments.
std::string write_lp_format(const LinearModel& model);
void write_lp_file(const LinearModel& model, const std::string& path);

// External solver hook: `command <model.lp> <solution-file>` is invoked and
// the solution file read back (lines: `status <word>`, `objective <num>`,
// `x<j> <num>`...). Configured explicitly or via the RSP_BACKEND environment
// variable; solve_with_backend throws SolverError when unconfigured.
struct BackendConfig {
  std::string command;
};
std::optional<BackendConfig> backend_from_env();
SolveResult solve_with_backend(const LinearModel& model,
                               const std::optional<BackendConfig>& config,
                               const std::string& workdir);

}  // namespace rsp::solver
