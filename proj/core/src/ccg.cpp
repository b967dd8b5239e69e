#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "rsp/robust.hpp"

namespace rsp::robust {

using scenarios::DailyScenario;
using scenarios::ScenarioSet;
using solver::SolveResult;
using solver::SolveStatus;

namespace {

SolveResult solve_master(Master& master, const SolveSettings& settings) {
  SolveResult res = master.model.has_integers() ? solver::solve_mip(master.model, settings.solver)
                                                : solver::solve_lp(master.model, settings.solver);
  if (res.status != SolveStatus::optimal)
    throw SolverError(std::string("master problem came back ") + to_string(res.status));
  return res;
}

double subset_objective(const grid::NetworkCase& net, const ScenarioSet& set, FormulationKind kind,
                        const std::vector<int>& indices, const SolveSettings& settings) {
  std::vector<DailyScenario> active;
  active.reserve(indices.size());
  for (int i : indices) active.push_back(set.scenarios.at(i));
  Master master = build_master(net, active, kind, settings);
  return solve_master(master, settings).objective;
}

}  // namespace

RobustSolution ccg_solve(const grid::NetworkCase& net, const ScenarioSet& set, FormulationKind kind,
                         double gap_tol, int max_iter, const SolveSettings& settings) {
  if (set.scenarios.empty()) throw DomainError("ccg_solve needs at least one scenario");
  if (gap_tol <= 0.0) throw DomainError("gap_tol must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");

  RobustSolution sol;
  sol.lb = -solver::kInf;
  sol.ub = solver::kInf;
  sol.critical_set.push_back(0);
  std::vector<DailyScenario> active{set.scenarios[0]};

  for (int it = 1; it <= max_iter; ++it) {
    Master master = build_master(net, active, kind, settings);
    const SolveResult mres = solve_master(master, settings);
    const StoragePlan plan = extract_plan(net, master, mres, kind);
    sol.lb = std::max(sol.lb, mres.objective);
    sol.iterations = it;

    const auto [widx, wval] = worst_case_response(net, plan, set, kind, settings);
    const double plan_value = kind.objective == Objective::cost
                                  ? investment_cost(net, plan) + net.day_weight * wval
                                  : wval;
    if (plan_value < sol.ub) {
      sol.ub = plan_value;
      sol.plan = plan;
      sol.gamma = wval;
      sol.objective = plan_value;
    }
    spdlog::debug("ccg iter {}: lb={:.6f} ub={:.6f} worst={} active={}", it, sol.lb, sol.ub, widx,
                  active.size());

    if (sol.ub - sol.lb <= gap_tol) {
      sol.converged = true;
      return sol;
    }
    if (std::find(sol.critical_set.begin(), sol.critical_set.end(), widx) !=
        sol.critical_set.end()) {
      sol.converged = true;
      return sol;
    }
    sol.critical_set.push_back(widx);
    active.push_back(set.scenarios[widx]);
  }
  sol.converged = false;
  spdlog::warn("ccg hit the iteration cap ({}) with gap {:.6g}", max_iter, sol.ub - sol.lb);
  return sol;
}

EssentialSet find_essential(const grid::NetworkCase& net, const ScenarioSet& set,
                            FormulationKind kind, const std::vector<int>& critical_set,
                            double full_objective, double equality_tol,
                            const SolveSettings& settings) {
  if (critical_set.empty()) throw DomainError("find_essential needs a nonempty critical set");
  if (equality_tol <= 0.0) throw DomainError("equality_tol must be positive");

  std::vector<int> current(critical_set);
  std::sort(current.begin(), current.end());
  current.erase(std::unique(current.begin(), current.end()), current.end());

  const double check = subset_objective(net, set, kind, current, settings);
  if (std::fabs(check - full_objective) > equality_tol)
    throw DomainError("critical set is not invariant: re-solve gives " + std::to_string(check) +
                      ", full objective is " + std::to_string(full_objective));

  const std::vector<int> order(current);
  for (int idx : order) {
    if (current.size() == 1) break;
    std::vector<int> tentative;
    tentative.reserve(current.size() - 1);
    for (int i : current)
      if (i != idx) tentative.push_back(i);
    const double obj = subset_objective(net, set, kind, tentative, settings);
    if (std::fabs(obj - full_objective) <= equality_tol) current = std::move(tentative);
  }

  EssentialSet essential;
  essential.indices = std::move(current);
  return essential;
}

}  // namespace rsp::robust
