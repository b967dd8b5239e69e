#pragma once

// Robust storage siting/sizing: second-stage dispatch models, master problems
// over active scenario sets, column-and-constraint generation, the extensive
// (all-scenarios) form, and reduction of critical sets to essential sets.

#include <string>
#include <utility>
#include <vector>

#include "rsp/grid.hpp"
#include "rsp/scenarios.hpp"
#include "rsp/solver.hpp"

namespace rsp::robust {

enum class Objective { cost, curtailment };
enum class Convexity { convex, nonconvex };

struct FormulationKind {
  Objective objective = Objective::cost;
  Convexity convexity = Convexity::convex;
};

const char* to_string(Objective o);
const char* to_string(Convexity c);

// First-stage decision per candidate bus. `units` is populated only by the
// quantized (nonconvex) formulation.
struct StoragePlan {
  std::vector<double> energy;  // MWh
  std::vector<double> power;   // MW
  std::vector<int> units;

  bool empty() const { return energy.empty(); }
};

std::string plan_to_json_text(const StoragePlan& plan);
StoragePlan plan_from_json_text(const std::string& text);

// Annualized investment of a plan under the case's storage catalog;
// cost_power_annual is $/kW-yr, hence the 1000 MW->kW factor.
double investment_cost(const grid::NetworkCase& net, const StoragePlan& plan);

struct OperationOutcome {
  double total_cost = 0.0;  // $, one day
  double total_shed = 0.0;  // MWh, one day
  scenarios::Matrix gen;        // [generator][t] MW
  scenarios::Matrix charge;     // [candidate][t] MW
  scenarios::Matrix discharge;  // [candidate][t] MW
  scenarios::Matrix soc;        // [candidate][t] MWh, end of hour
  scenarios::Matrix flow;       // [line][t] MW
  scenarios::Matrix angle;      // [bus][t] rad
  scenarios::Matrix shed;       // [bus][t] MW
};

struct RobustSolution {
  StoragePlan plan;
  double gamma = 0.0;      // worst-case second-stage value ($ or MWh)
  double objective = 0.0;  // investment + weighted gamma (cost) or gamma
  double lb = 0.0;
  double ub = 0.0;
  std::vector<int> critical_set;  // insertion order, deduplicated
  int iterations = 0;
  bool converged = true;
};

struct EssentialSet {
  std::vector<int> indices;  // ascending
  int cardinality() const { return static_cast<int>(indices.size()); }
};

struct SolveSettings {
  solver::SolveOptions solver;
  bool cyclic_soc = false;  // require end-of-day SOC to return to the start
};

// Second-stage model plus the variable handles needed to read a schedule
// back out. `status` is empty for the convex kind (the charge/discharge
// exclusivity binaries are projected out exactly).
struct SecondStage {
  solver::LinearModel model;
  std::vector<std::vector<solver::VarRef>> gen, charge, discharge, soc, flow, angle, shed, status;
};

SecondStage build_second_stage(const grid::NetworkCase& net, const StoragePlan& plan,
                               const scenarios::DailyScenario& scenario, FormulationKind kind,
                               const SolveSettings& settings = {});

OperationOutcome evaluate_operation(const grid::NetworkCase& net, const StoragePlan& plan,
                                    const scenarios::DailyScenario& scenario, FormulationKind kind,
                                    const SolveSettings& settings = {});

// Enumerates the set and returns (index, second-stage value) of the worst
// scenario under the fixed plan; ties resolve to the lowest index.
std::pair<int, double> worst_case_response(const grid::NetworkCase& net, const StoragePlan& plan,
                                           const scenarios::ScenarioSet& set, FormulationKind kind,
                                           const SolveSettings& settings = {});

// Master problem over the active scenarios: first-stage variables, the
// epigraph variable, and one recourse copy per active scenario.
struct Master {
  solver::LinearModel model;
  std::vector<solver::VarRef> energy, power, units;
  solver::VarRef gamma;
};

Master build_master(const grid::NetworkCase& net, const std::vector<scenarios::DailyScenario>& active,
                    FormulationKind kind, const SolveSettings& settings = {});

StoragePlan extract_plan(const grid::NetworkCase& net, const Master& master,
                         const solver::SolveResult& result, FormulationKind kind);

RobustSolution ccg_solve(const grid::NetworkCase& net, const scenarios::ScenarioSet& set,
                         FormulationKind kind, double gap_tol = 1e-6, int max_iter = 100,
                         const SolveSettings& settings = {});

// One monolithic model enumerating every scenario; the oracle the
// decomposition is tested against. Guarded by a variable-count cap.
RobustSolution extensive_solve(const grid::NetworkCase& net, const scenarios::ScenarioSet& set,
                               FormulationKind kind, long var_cap = 2000000,
                               const SolveSettings& settings = {});

// Greedy reduction of an invariant critical set to an irreducible essential
// set. Asserts the invariance precondition before reducing.
EssentialSet find_essential(const grid::NetworkCase& net, const scenarios::ScenarioSet& set,
                            FormulationKind kind, const std::vector<int>& critical_set,
                            double full_objective, double equality_tol,
                            const SolveSettings& settings = {});

}  // namespace rsp::robust
