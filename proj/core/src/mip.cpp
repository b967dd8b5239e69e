#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <vector>

#include "rsp/solver.hpp"
#include "simplex_internal.hpp"

namespace rsp::solver {

namespace {

struct Node {
  double bound = 0.0;  // parent objective, valid bound for this node
  int parent = -1;
  int var = -1;  // branching bound applied on top of the parent chain
  double lo = 0.0, hi = 0.0;
  long id = 0;
};

struct QueueEntry {
  double key = 0.0;
  long id = 0;
  int node = -1;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.key != b.key) return a.key > b.key;  // min-heap on key
    return a.id > b.id;
  }
};

}  // namespace

SolveResult solve_mip(const LinearModel& model, const SolveOptions& opts) {
  if (!model.has_integers()) return solve_lp(model, opts);

  const int n = model.num_vars();
  const bool minimize = model.obj_sense() == ObjSense::minimize;
  const auto better = [minimize](double a, double b) { return minimize ? a < b : a > b; };
  const auto t0 = std::chrono::steady_clock::now();
  const auto out_of_time = [&] {
    if (opts.time_limit <= 0.0) return false;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return dt.count() > opts.time_limit;
  };

  std::vector<double> base_lo(n), base_hi(n);
  std::vector<int> int_vars;
  for (int j = 0; j < n; ++j) {
    base_lo[j] = model.var_lo(j);
    base_hi[j] = model.var_hi(j);
    if (model.var_kind(j) != VarKind::continuous) int_vars.push_back(j);
  }

  std::vector<Node> nodes;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;
  std::vector<double> lo(n), hi(n);
  const auto load_bounds = [&](int node) {
    lo = base_lo;
    hi = base_hi;
    for (int k = node; k >= 0; k = nodes[k].parent) {
      if (nodes[k].var < 0) continue;
      lo[nodes[k].var] = std::max(lo[nodes[k].var], nodes[k].lo);
      hi[nodes[k].var] = std::min(hi[nodes[k].var], nodes[k].hi);
    }
  };

  SolveResult best;
  bool have_incumbent = false;
  long total_iters = 0;
  long processed = 0;
  long next_id = 0;

  // Most-fractional variable, ties broken by lowest index. General integers
  // take priority over binaries: binary exclusivity flags ride along at
  // whatever fractional level the coupling rows force, so branching them
  // before the unit counts just clones the relaxation.
  const auto fractional = [&](const std::vector<double>& x, int* var, double* dist) {
    *var = -1;
    *dist = 0.0;
    bool var_is_general = false;
    for (int j : int_vars) {
      const double f = std::fabs(x[j] - std::round(x[j]));
      if (f <= opts.int_tol) continue;
      const bool general = model.var_kind(j) == VarKind::integer;
      if (*var < 0 || (general && !var_is_general) ||
          (general == var_is_general && f > *dist)) {
        *dist = f;
        *var = j;
        var_is_general = general;
      }
    }
    return *var >= 0;
  };

  const auto try_incumbent = [&](const SolveResult& cand) {
    if (cand.status != SolveStatus::optimal) return;
    if (!have_incumbent || better(cand.objective, best.objective)) {
      best = cand;
      have_incumbent = true;
    }
  };

  // Rounding heuristic: fix the integer variables of `x` to their nearest
  // integers and re-solve the continuous rest. Only verified-optimal LP
  // solutions become incumbents. Exclusivity-style binaries tend to sit at
  // the fractional level their coupling row forces (on/off flags at
  // load/capacity), where rounding up is the lossless repair, so a second
  // probe retries with fractional binaries pushed to their ceiling.
  const auto rounding_fix = [&](const std::vector<double>& x) {
    std::vector<double> flo = lo, fhi = hi;
    for (int j : int_vars) {
      const double r = std::clamp(std::round(x[j]), lo[j], hi[j]);
      flo[j] = r;
      fhi[j] = r;
    }
    SolveResult sub = detail::solve_lp_with_bounds(model, opts, flo, fhi);
    total_iters += sub.iterations;
    try_incumbent(sub);
    bool differs = false;
    for (int j : int_vars) {
      if (model.var_kind(j) != VarKind::binary) continue;
      const double c = std::clamp(std::ceil(x[j] - opts.int_tol), lo[j], hi[j]);
      if (c != flo[j]) {
        flo[j] = c;
        fhi[j] = c;
        differs = true;
      }
    }
    if (differs) {
      sub = detail::solve_lp_with_bounds(model, opts, flo, fhi);
      total_iters += sub.iterations;
      try_incumbent(sub);
    }
  };

  const auto prune_key = [&](double incumbent) {
    const double margin = 1e-9 * (1.0 + std::fabs(incumbent));
    return minimize ? incumbent - margin : incumbent + margin;
  };

  nodes.push_back(Node{minimize ? -kInf : kInf, -1, -1, 0.0, 0.0, next_id});
  open.push(QueueEntry{nodes[0].bound, next_id++, 0});

  SolveStatus exit_status = SolveStatus::optimal;
  while (!open.empty()) {
    if (processed >= opts.max_bnb_nodes || out_of_time()) {
      exit_status = SolveStatus::limit;
      break;
    }
    const QueueEntry top = open.top();
    open.pop();
    const Node& node = nodes[top.node];
    if (have_incumbent && !better(node.bound, prune_key(best.objective)) && node.parent >= 0) continue;
    if (opts.trace) opts.trace->popped_bounds.push_back(node.bound);

    load_bounds(top.node);
    SolveResult rel = detail::solve_lp_with_bounds(model, opts, lo, hi);
    total_iters += rel.iterations;
    ++processed;

    if (rel.status == SolveStatus::unbounded) {
      rel.nodes = processed;
      rel.iterations = total_iters;
      return rel;
    }
    if (rel.status == SolveStatus::limit) {
      exit_status = SolveStatus::limit;
      break;
    }
    if (rel.status != SolveStatus::optimal) continue;
    if (have_incumbent && !better(rel.objective, prune_key(best.objective))) continue;

    int bvar = -1;
    double bdist = 0.0;
    if (!fractional(rel.values, &bvar, &bdist)) {
      try_incumbent(rel);
      continue;
    }

    rounding_fix(rel.values);

    // The node bound caps everything below it: an incumbent that already
    // attains it (within tolerance) makes the subtree redundant.
    if (have_incumbent) {
      const double m = 1e-7 * (1.0 + std::fabs(rel.objective));
      const double attained = minimize ? best.objective - m : best.objective + m;
      if (!better(rel.objective, attained)) continue;
    }

    const double xv = rel.values[bvar];
    const int down = static_cast<int>(nodes.size());
    nodes.push_back(Node{rel.objective, top.node, bvar, lo[bvar], std::floor(xv), next_id});
    open.push(QueueEntry{rel.objective, next_id++, down});
    const int up = static_cast<int>(nodes.size());
    nodes.push_back(Node{rel.objective, top.node, bvar, std::ceil(xv), hi[bvar], next_id});
    open.push(QueueEntry{rel.objective, next_id++, up});
  }

  SolveResult res;
  if (have_incumbent) {
    res = best;
    res.status = exit_status == SolveStatus::limit ? SolveStatus::limit : SolveStatus::optimal;
    res.row_duals.clear();
    res.reduced_costs.clear();
  } else {
    res.status = exit_status == SolveStatus::limit ? SolveStatus::limit : SolveStatus::infeasible;
    res.objective = minimize ? kInf : -kInf;
  }
  res.nodes = processed;
  res.iterations = total_iters;
  return res;
}

}  // namespace rsp::solver
