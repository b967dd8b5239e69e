#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// use brute-force methods (vertex enumeration, exhaustive fixing, exact
// rational arithmetic) so they share no code path with the implementations
// under test.

#include <cstdint>
#include <string>
#include <vector>

#include "rsp/grid.hpp"
#include "rsp/rng.hpp"
#include "rsp/scenarios.hpp"
#include "rsp/solver.hpp"

namespace rsp::testing {

// Directory holding the shipped data tree (cases/, profiles/, configs/).
std::string data_dir();

std::string read_file(const std::string& path);

// Single bus, one generator, one storage candidate, flat load. The
// closed-form dispatch fixture: with no storage activity the optimal day
// cost is T * peak * load_factor * gen_cost whenever capacity suffices.
grid::NetworkCase single_bus_case(double gen_cap = 100.0, double gen_cost = 10.0,
                                  double peak_load = 50.0, double shed_cost = 3000.0);

// Scenario with constant factors across the horizon, sized to the case.
scenarios::DailyScenario flat_scenario(const grid::NetworkCase& net, double load_factor,
                                       double wind_factor = 0.0);

grid::NetworkCase desk3_case();
grid::NetworkCase demo6_case();

// Random desk-scale instance with relatively complete recourse by
// construction: generator ramps equal to p_max, aggregate wind capacity
// below the minimum aggregate load, and line capacities large enough that
// no injection can be stranded.
struct DeskInstance {
  grid::NetworkCase net;
  scenarios::ScenarioSet set;
};
DeskInstance random_desk_instance(std::uint64_t seed, int min_scenarios = 5,
                                  int max_scenarios = 50);

// Rescales the set so scenario `idx` strictly dominates every other one:
// elementwise strictly higher load factors and no higher wind factors.
void make_dominant(scenarios::ScenarioSet& set, int idx);

// Brute-force LP oracle: min c'x over finite box bounds and dense rows.
struct OracleLp {
  int n = 0;
  std::vector<double> c, lo, hi;
  std::vector<std::vector<double>> rows;
  std::vector<solver::Sense> senses;
  std::vector<double> rhs;
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
};

// Enumerates every choice of n active constraints (rows and bounds), solves
// the resulting square system, and keeps the best feasible vertex. Complete
// for boxes: a nonempty bounded region has an optimal vertex.
OracleResult solve_lp_by_vertices(const OracleLp& lp);

solver::LinearModel lp_to_model(const OracleLp& lp);

OracleLp random_oracle_lp(rng::Stream& s);

// Brute-force MIP oracle: integer variables are enumerated over their
// (small) bound ranges; the continuous remainder goes through the vertex
// oracle. `int_kinds` records binary vs general-integer per entry.
struct OracleMip {
  OracleLp lp;
  std::vector<int> int_vars;
  std::vector<solver::VarKind> int_kinds;
};

OracleResult solve_mip_by_enumeration(const OracleMip& mip);

solver::LinearModel mip_to_model(const OracleMip& mip);

OracleMip random_oracle_mip(rng::Stream& s);

// Exact P[Bin(K, p_num/p_den) <= d-1] as an __int128 rational, K <= 30,
// 1 <= p_num < p_den <= 5. Exact numerator and denominator, one rounding.
long double exact_binom_tail(int K, int d, int p_num, int p_den);

}  // namespace rsp::testing
