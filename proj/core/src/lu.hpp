#pragma once

// Sparse LU factorization of a simplex basis (left-looking, Gilbert-Peierls
// style: symbolic reachability by depth-first search, partial pivoting by
// magnitude). Private to the solver; the simplex layers product-form eta
// updates on top between refactorizations.

#include <vector>

namespace rsp::solver::detail {

struct BasisColumns {
  std::vector<int> ptr;  // size m+1
  std::vector<int> row;
  std::vector<double> val;
};

class BasisLu {
 public:
  // Returns the basis positions whose columns could not be pivoted (empty on
  // success). The caller replaces failed columns and factors again.
  std::vector<int> factor(int m, const BasisColumns& cols);

  // Solves B x = b. Input indexed by row, output by basis position.
  void ftran(std::vector<double>& x) const;
  // Solves B^T y = c. Input indexed by basis position, output by row.
  void btran(std::vector<double>& x) const;

  long fill() const { return static_cast<long>(lrow_.size() + urow_.size()); }
  bool ok() const { return complete_; }
  // row -> pivot step, -1 when the row was never pivoted (singular basis).
  const std::vector<int>& row_steps() const { return pinv_; }

 private:
  int m_ = 0;
  bool complete_ = false;
  std::vector<int> pivrow_;  // pivot step -> row
  std::vector<int> pinv_;    // row -> pivot step
  std::vector<int> qcol_;    // pivot step -> basis position
  std::vector<int> qinv_;    // basis position -> pivot step
  // L is unit lower triangular in pivot order; entries keyed by row id.
  std::vector<int> lptr_, lrow_;
  std::vector<double> lval_;
  // U entries per step keyed by earlier pivot steps, diagonal separate.
  std::vector<int> uptr_, urow_;
  std::vector<double> uval_;
  std::vector<double> udiag_;

  mutable std::vector<double> work_;
};

}  // namespace rsp::solver::detail
