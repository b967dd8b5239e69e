#pragma once

#include <vector>

#include "rsp/solver.hpp"

namespace rsp::solver::detail {

// LP solve with explicit variable bounds replacing the model's own. Used by
// the branch-and-bound layer so nodes never mutate the shared model.
SolveResult solve_lp_with_bounds(const LinearModel& model, const SolveOptions& opt,
                                 const std::vector<double>& lb, const std::vector<double>& ub);

}  // namespace rsp::solver::detail
