#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lu.hpp"
#include "rsp/solver.hpp"
#include "simplex_internal.hpp"

namespace rsp::solver {

namespace {

using detail::BasisColumns;
using detail::BasisLu;

constexpr double kRatioPivTol = 1e-9;
constexpr double kEtaDrop = 1e-12;
constexpr double kRatioTie = 1e-9;
constexpr int kRefactorEvery = 100;

enum : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeZero = 3 };

struct Eta {
  int pos = -1;
  double piv = 0.0;
  std::vector<std::pair<int, double>> ent;
};

class Simplex {
 public:
  Simplex(const LinearModel& model, const SolveOptions& opt, const std::vector<double>& lb,
          const std::vector<double>& ub)
      : model_(model), opt_(opt) {
    n_ = model.num_vars();
    m_ = model.num_rows();
    tot_ = n_ + m_;

    aptr_.assign(n_ + 1, 0);
    for (int i = 0; i < m_; ++i)
      for (const Term& t : model.row_terms(i)) ++aptr_[t.var + 1];
    for (int j = 0; j < n_; ++j) aptr_[j + 1] += aptr_[j];
    arow_.resize(aptr_[n_]);
    aval_.resize(aptr_[n_]);
    std::vector<int> fill(aptr_.begin(), aptr_.end() - 1);
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : model.row_terms(i)) {
        arow_[fill[t.var]] = i;
        aval_[fill[t.var]] = t.coef;
        ++fill[t.var];
      }
    }

    lb_.resize(tot_);
    ub_.resize(tot_);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = lb[j];
      ub_[j] = ub[j];
    }
    for (int i = 0; i < m_; ++i) {
      const double rhs = model.row_rhs(i);
      switch (model.row_sense(i)) {
        case Sense::le: lb_[n_ + i] = -kInf; ub_[n_ + i] = rhs; break;
        case Sense::ge: lb_[n_ + i] = rhs; ub_[n_ + i] = kInf; break;
        case Sense::eq: lb_[n_ + i] = rhs; ub_[n_ + i] = rhs; break;
      }
    }

    sign_ = model.obj_sense() == ObjSense::minimize ? 1.0 : -1.0;
    cost_.assign(tot_, 0.0);
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) {
      cost_[j] = sign_ * model.obj_coef(j);
      cmax = std::max(cmax, std::fabs(cost_[j]));
    }
    dual_tol_ = opt.opt_tol * (1.0 + cmax);

    iter_cap_ = opt.max_simplex_iters > 0 ? opt.max_simplex_iters
                                          : 20000 + 10L * static_cast<long>(tot_);
    bland_after_ = 5L * static_cast<long>(tot_);
  }

  SolveResult run();

 private:
  const LinearModel& model_;
  SolveOptions opt_;
  int n_ = 0, m_ = 0, tot_ = 0;
  std::vector<int> aptr_, arow_;
  std::vector<double> aval_;
  std::vector<double> lb_, ub_, cost_;
  double sign_ = 1.0;
  double dual_tol_ = 1e-7;
  long iter_cap_ = 0;
  long bland_after_ = 0;

  std::vector<int> basis_;
  std::vector<int> pos_of_;
  std::vector<std::uint8_t> stat_;
  std::vector<double> x_;
  BasisLu lu_;
  std::vector<Eta> etas_;
  long iters_ = 0;

  double bound_tol(double b) const { return opt_.feas_tol * (1.0 + std::fabs(b)); }

  void ftran(std::vector<double>& v) const {
    lu_.ftran(v);
    for (const Eta& e : etas_) {
      const double t = v[e.pos] / e.piv;
      if (t != 0.0)
        for (const auto& [i, w] : e.ent) v[i] -= w * t;
      v[e.pos] = t;
    }
  }

  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->pos];
      for (const auto& [i, w] : it->ent) acc -= w * v[i];
      v[it->pos] = acc / it->piv;
    }
    lu_.btran(v);
  }

  void scatter_column(int j, std::vector<double>& dense) const {
    if (j < n_) {
      for (int e = aptr_[j]; e < aptr_[j + 1]; ++e) dense[arow_[e]] += aval_[e];
    } else {
      dense[j - n_] -= 1.0;
    }
  }

  void refactor() {
    for (int attempt = 0; attempt < 4; ++attempt) {
      BasisColumns cols;
      cols.ptr.assign(1, 0);
      for (int p = 0; p < m_; ++p) {
        const int j = basis_[p];
        if (j < n_) {
          for (int e = aptr_[j]; e < aptr_[j + 1]; ++e) {
            cols.row.push_back(arow_[e]);
            cols.val.push_back(aval_[e]);
          }
        } else {
          cols.row.push_back(j - n_);
          cols.val.push_back(-1.0);
        }
        cols.ptr.push_back(static_cast<int>(cols.row.size()));
      }
      std::vector<int> failed = lu_.factor(m_, cols);
      if (failed.empty()) {
        etas_.clear();
        return;
      }
      // Singular basis: swap the logicals of uncovered rows in for the
      // columns that could not be pivoted, then factor again.
      std::sort(failed.begin(), failed.end());
      std::vector<int> uncovered;
      for (int r = 0; r < m_; ++r)
        if (lu_.row_steps()[r] < 0) uncovered.push_back(r);
      if (uncovered.size() < failed.size()) throw SolverError("basis repair failed");
      for (std::size_t k = 0; k < failed.size(); ++k) {
        const int p = failed[k];
        const int out = basis_[p];
        const int in = n_ + uncovered[k];
        if (pos_of_[in] >= 0) throw SolverError("basis repair failed");
        if (lb_[out] > -kInf) {
          stat_[out] = kAtLower;
          x_[out] = lb_[out];
        } else if (ub_[out] < kInf) {
          stat_[out] = kAtUpper;
          x_[out] = ub_[out];
        } else {
          stat_[out] = kFreeZero;
          x_[out] = 0.0;
        }
        pos_of_[out] = -1;
        basis_[p] = in;
        stat_[in] = kBasic;
        pos_of_[in] = p;
      }
    }
    throw SolverError("basis factorization failed");
  }

  void recompute_basics() {
    std::vector<double> r(m_, 0.0);
    for (int j = 0; j < tot_; ++j) {
      if (stat_[j] == kBasic || x_[j] == 0.0) continue;
      if (j < n_) {
        for (int e = aptr_[j]; e < aptr_[j + 1]; ++e) r[arow_[e]] -= aval_[e] * x_[j];
      } else {
        r[j - n_] += x_[j];
      }
    }
    ftran(r);
    for (int p = 0; p < m_; ++p) x_[basis_[p]] = r[p];
  }

  // Phase-1 pricing vector by basis position: -1 below lower bound, +1 above
  // upper. Returns the summed violation.
  double infeasibility(std::vector<double>& phi) const {
    double total = 0.0;
    for (int p = 0; p < m_; ++p) {
      const int b = basis_[p];
      const double v = x_[b];
      phi[p] = 0.0;
      if (v < lb_[b] - bound_tol(lb_[b])) {
        phi[p] = -1.0;
        total += lb_[b] - v;
      } else if (v > ub_[b] + bound_tol(ub_[b])) {
        phi[p] = 1.0;
        total += v - ub_[b];
      }
    }
    return total;
  }

  double reduced_cost(int j, const std::vector<double>& y, bool phase1) const {
    double d = phase1 ? 0.0 : cost_[j];
    if (j < n_) {
      for (int e = aptr_[j]; e < aptr_[j + 1]; ++e) d -= aval_[e] * y[arow_[e]];
    } else {
      d += y[j - n_];
    }
    return d;
  }

  SolveResult finish(SolveStatus status, const std::vector<double>* y_opt, double infeas);
};

SolveResult Simplex::run() {
  basis_.resize(m_);
  pos_of_.assign(tot_, -1);
  stat_.assign(tot_, kAtLower);
  x_.assign(tot_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (lb_[j] > ub_[j] + 1e-12) return finish(SolveStatus::infeasible, nullptr, lb_[j] - ub_[j]);
    if (lb_[j] > -kInf) {
      stat_[j] = kAtLower;
      x_[j] = lb_[j];
    } else if (ub_[j] < kInf) {
      stat_[j] = kAtUpper;
      x_[j] = ub_[j];
    } else {
      stat_[j] = kFreeZero;
      x_[j] = 0.0;
    }
  }
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    stat_[n_ + i] = kBasic;
    pos_of_[n_ + i] = i;
  }
  refactor();
  recompute_basics();
  bool fresh = true;

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> phi(m_), y(m_), w(m_);

  for (;;) {
    if (opt_.time_limit > 0.0 && (iters_ & 63) == 0) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      if (dt.count() > opt_.time_limit) return finish(SolveStatus::limit, nullptr, 0.0);
    }
    if (iters_ >= iter_cap_) return finish(SolveStatus::limit, nullptr, 0.0);
    if (etas_.size() >= kRefactorEvery) {
      refactor();
      recompute_basics();
      fresh = true;
    }

    const double infeas = infeasibility(phi);
    const bool phase1 = infeas > 0.0;
    if (phase1) {
      y.assign(phi.begin(), phi.end());
    } else {
      for (int p = 0; p < m_; ++p) y[p] = cost_[basis_[p]];
    }
    btran(y);

    const bool bland = iters_ >= bland_after_;
    // Phase-1 costs are unit scale, so the cost-scaled tolerance only
    // applies to real pricing.
    const double dtol = phase1 ? opt_.opt_tol : dual_tol_;
    int enter = -1, sigma = 0;
    double best = 0.0;
    for (int j = 0; j < tot_; ++j) {
      if (stat_[j] == kBasic || lb_[j] == ub_[j]) continue;
      const double d = reduced_cost(j, y, phase1);
      int s = 0;
      if (stat_[j] == kAtLower && d < -dtol) s = 1;
      else if (stat_[j] == kAtUpper && d > dtol) s = -1;
      else if (stat_[j] == kFreeZero && std::fabs(d) > dtol) s = d < 0.0 ? 1 : -1;
      if (s == 0) continue;
      if (bland) {
        enter = j;
        sigma = s;
        break;
      }
      if (std::fabs(d) > best) {
        best = std::fabs(d);
        enter = j;
        sigma = s;
      }
    }

    if (enter < 0) {
      if (!fresh) {
        refactor();
        recompute_basics();
        fresh = true;
        continue;
      }
      if (phase1) return finish(SolveStatus::infeasible, &y, infeas);
      return finish(SolveStatus::optimal, &y, 0.0);
    }

    std::fill(w.begin(), w.end(), 0.0);
    scatter_column(enter, w);
    ftran(w);

    double flip_t = kInf;
    if (lb_[enter] > -kInf && ub_[enter] < kInf) flip_t = ub_[enter] - lb_[enter];
    double block_t = kInf;
    int leave = -1;
    bool leave_upper = false;
    double leave_rate = 0.0;
    for (int p = 0; p < m_; ++p) {
      const double rate = -sigma * w[p];
      if (std::fabs(w[p]) <= kRatioPivTol) continue;
      const int b = basis_[p];
      const double xb = x_[b], l = lb_[b], u = ub_[b];
      double t = kInf;
      bool tu = false;
      if (phase1 && xb < l - bound_tol(l)) {
        if (rate > 0.0) t = (l - xb) / rate;
      } else if (phase1 && xb > u + bound_tol(u)) {
        if (rate < 0.0) {
          t = (u - xb) / rate;
          tu = true;
        }
      } else if (rate > 0.0) {
        if (u < kInf) {
          t = (u - xb) / rate;
          tu = true;
        }
      } else {
        if (l > -kInf) t = (l - xb) / rate;
      }
      if (t == kInf) continue;
      if (t < 0.0) t = 0.0;
      bool take = false;
      if (t < block_t - kRatioTie) {
        take = true;
      } else if (t < block_t + kRatioTie && leave >= 0) {
        const double aw = std::fabs(w[p]), bw = std::fabs(leave_rate);
        if (aw > bw * (1.0 + 1e-12)) take = true;
        else if (aw >= bw * (1.0 - 1e-12) && b < basis_[leave]) take = true;
      }
      if (take) {
        block_t = t;
        leave = p;
        leave_rate = w[p];
        leave_upper = tu;
      }
    }

    if (leave < 0 && flip_t == kInf) {
      if (phase1) {
        if (!fresh) {
          refactor();
          recompute_basics();
          fresh = true;
          continue;
        }
        throw SolverError("phase 1 ratio test found no blocking bound");
      }
      return finish(SolveStatus::unbounded, nullptr, 0.0);
    }

    if (leave >= 0 && std::fabs(leave_rate) < 1e-7 && !fresh) {
      refactor();
      recompute_basics();
      fresh = true;
      continue;
    }

    ++iters_;
    if (flip_t <= block_t) {
      x_[enter] = stat_[enter] == kAtLower ? ub_[enter] : lb_[enter];
      for (int p = 0; p < m_; ++p) x_[basis_[p]] -= sigma * w[p] * flip_t;
      stat_[enter] = stat_[enter] == kAtLower ? kAtUpper : kAtLower;
      continue;
    }

    x_[enter] += sigma * block_t;
    for (int p = 0; p < m_; ++p) x_[basis_[p]] -= sigma * w[p] * block_t;
    const int lv = basis_[leave];
    x_[lv] = leave_upper ? ub_[lv] : lb_[lv];
    stat_[lv] = leave_upper ? kAtUpper : kAtLower;
    pos_of_[lv] = -1;
    basis_[leave] = enter;
    stat_[enter] = kBasic;
    pos_of_[enter] = leave;

    Eta eta;
    eta.pos = leave;
    eta.piv = w[leave];
    for (int p = 0; p < m_; ++p)
      if (p != leave && std::fabs(w[p]) > kEtaDrop) eta.ent.emplace_back(p, w[p]);
    etas_.push_back(std::move(eta));
    fresh = false;
  }
}

SolveResult Simplex::finish(SolveStatus status, const std::vector<double>* y_opt, double infeas) {
  SolveResult res;
  res.status = status;
  res.iterations = iters_;
  res.values.assign(x_.begin(), x_.begin() + n_);
  res.infeasibility = infeas;

  if (status == SolveStatus::optimal) {
    double obj = model_.obj_constant();
    for (int j = 0; j < n_; ++j) obj += model_.obj_coef(j) * x_[j];
    res.objective = obj;
    if (y_opt) {
      res.row_duals.resize(m_);
      for (int i = 0; i < m_; ++i) res.row_duals[i] = sign_ * (*y_opt)[i];
      res.reduced_costs.resize(n_);
      for (int j = 0; j < n_; ++j) res.reduced_costs[j] = sign_ * reduced_cost(j, *y_opt, false);
    }
  } else if (status == SolveStatus::unbounded) {
    res.objective = sign_ > 0.0 ? -kInf : kInf;
  } else if (status == SolveStatus::infeasible) {
    res.objective = sign_ > 0.0 ? kInf : -kInf;
    if (y_opt) {
      res.farkas.resize(m_);
      for (int i = 0; i < m_; ++i) res.farkas[i] = (*y_opt)[i];
    }
  } else {
    double obj = model_.obj_constant();
    for (int j = 0; j < n_; ++j) obj += model_.obj_coef(j) * x_[j];
    res.objective = obj;
  }
  return res;
}

}  // namespace

namespace detail {

SolveResult solve_lp_with_bounds(const LinearModel& model, const SolveOptions& opt,
                                 const std::vector<double>& lb, const std::vector<double>& ub) {
  Simplex s(model, opt, lb, ub);
  return s.run();
}

}  // namespace detail

SolveResult solve_lp(const LinearModel& model, const SolveOptions& opts) {
  if (model.has_integers())
    throw DomainError("solve_lp: model has integer variables, use solve_mip");
  std::vector<double> lb(model.num_vars()), ub(model.num_vars());
  for (int j = 0; j < model.num_vars(); ++j) {
    lb[j] = model.var_lo(j);
    ub[j] = model.var_hi(j);
  }
  return detail::solve_lp_with_bounds(model, opts, lb, ub);
}

}  // namespace rsp::solver
