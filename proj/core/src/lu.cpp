#include "lu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsp::solver::detail {

namespace {
constexpr double kPivotFloor = 1e-11;
constexpr double kDropTol = 1e-14;
}  // namespace

std::vector<int> BasisLu::factor(int m, const BasisColumns& cols) {
  m_ = m;
  pivrow_.assign(m, -1);
  pinv_.assign(m, -1);
  qcol_.assign(m, -1);
  qinv_.assign(m, -1);
  lptr_.assign(1, 0);
  lrow_.clear();
  lval_.clear();
  uptr_.assign(1, 0);
  urow_.clear();
  uval_.clear();
  udiag_.clear();
  work_.assign(m, 0.0);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cols.ptr[a + 1] - cols.ptr[a] < cols.ptr[b + 1] - cols.ptr[b];
  });

  std::vector<double> w(m, 0.0);
  std::vector<int> seen(m, -1);
  std::vector<int> vstep(m, -1);
  std::vector<int> touched, topo;
  std::vector<std::pair<int, int>> stack;  // (step, next child offset)
  std::vector<int> failed;

  int k = 0;
  for (int oi = 0; oi < m; ++oi) {
    const int p = order[oi];
    touched.clear();
    topo.clear();

    for (int e = cols.ptr[p]; e < cols.ptr[p + 1]; ++e) {
      const int r = cols.row[e];
      if (seen[r] != oi) {
        seen[r] = oi;
        w[r] = 0.0;
        touched.push_back(r);
      }
      w[r] += cols.val[e];
    }

    // Symbolic pass: depth-first search over already-pivoted steps reachable
    // from the column's nonzeros. Reverse post-order is a topological order
    // because every L update feeds strictly later pivot steps.
    for (int e = cols.ptr[p]; e < cols.ptr[p + 1]; ++e) {
      const int s0 = pinv_[cols.row[e]];
      if (s0 < 0 || vstep[s0] == oi) continue;
      vstep[s0] = oi;
      stack.clear();
      stack.emplace_back(s0, lptr_[s0]);
      while (!stack.empty()) {
        auto& [s, it] = stack.back();
        bool descended = false;
        while (it < lptr_[s + 1]) {
          const int s2 = pinv_[lrow_[it]];
          ++it;
          if (s2 >= 0 && vstep[s2] != oi) {
            vstep[s2] = oi;
            stack.emplace_back(s2, lptr_[s2]);
            descended = true;
            break;
          }
        }
        if (!descended && !stack.empty() && stack.back().second >= lptr_[stack.back().first + 1]) {
          topo.push_back(stack.back().first);
          stack.pop_back();
        }
      }
    }

    for (auto si = topo.rbegin(); si != topo.rend(); ++si) {
      const int s = *si;
      const double t = w[pivrow_[s]];
      if (t == 0.0) continue;
      for (int e = lptr_[s]; e < lptr_[s + 1]; ++e) {
        const int r = lrow_[e];
        if (seen[r] != oi) {
          seen[r] = oi;
          w[r] = 0.0;
          touched.push_back(r);
        }
        w[r] -= lval_[e] * t;
      }
    }

    double colmax = 0.0;
    for (int r : touched) colmax = std::max(colmax, std::fabs(w[r]));
    int pr = -1;
    double best = 0.0;
    for (int r : touched) {
      if (pinv_[r] >= 0) continue;
      const double a = std::fabs(w[r]);
      if (a > best || (a == best && pr >= 0 && a > 0.0 && r < pr)) {
        best = a;
        pr = r;
      }
    }
    if (pr < 0 || best <= kPivotFloor * (1.0 + colmax)) {
      failed.push_back(p);
      for (int r : touched) w[r] = 0.0;
      continue;
    }

    const double piv = w[pr];
    const double drop = kDropTol * (1.0 + colmax);
    std::sort(touched.begin(), touched.end());
    for (int r : touched) {
      if (std::fabs(w[r]) <= drop) continue;
      if (pinv_[r] >= 0) {
        urow_.push_back(pinv_[r]);
        uval_.push_back(w[r]);
      } else if (r != pr) {
        lrow_.push_back(r);
        lval_.push_back(w[r] / piv);
      }
    }
    udiag_.push_back(piv);
    pinv_[pr] = k;
    pivrow_[k] = pr;
    qcol_[k] = p;
    qinv_[p] = k;
    uptr_.push_back(static_cast<int>(urow_.size()));
    lptr_.push_back(static_cast<int>(lrow_.size()));
    ++k;

    for (int r : touched) w[r] = 0.0;
  }

  complete_ = failed.empty();
  return failed;
}

void BasisLu::ftran(std::vector<double>& x) const {
  const int m = m_;
  for (int k = 0; k < m; ++k) {
    const double t = x[pivrow_[k]];
    if (t == 0.0) continue;
    for (int e = lptr_[k]; e < lptr_[k + 1]; ++e) x[lrow_[e]] -= lval_[e] * t;
  }
  for (int k = 0; k < m; ++k) work_[k] = x[pivrow_[k]];
  for (int k = m - 1; k >= 0; --k) {
    const double z = work_[k] / udiag_[k];
    work_[k] = z;
    if (z == 0.0) continue;
    for (int e = uptr_[k]; e < uptr_[k + 1]; ++e) work_[urow_[e]] -= uval_[e] * z;
  }
  for (int k = 0; k < m; ++k) x[qcol_[k]] = work_[k];
}

void BasisLu::btran(std::vector<double>& x) const {
  const int m = m_;
  for (int k = 0; k < m; ++k) work_[k] = x[qcol_[k]];
  for (int k = 0; k < m; ++k) {
    double acc = work_[k];
    for (int e = uptr_[k]; e < uptr_[k + 1]; ++e) acc -= uval_[e] * work_[urow_[e]];
    work_[k] = acc / udiag_[k];
  }
  for (int k = m - 1; k >= 0; --k) {
    double acc = work_[k];
    for (int e = lptr_[k]; e < lptr_[k + 1]; ++e) acc -= lval_[e] * x[lrow_[e]];
    x[pivrow_[k]] = acc;
  }
}

}  // namespace rsp::solver::detail
