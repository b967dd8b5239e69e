// Acceptance checks for the planning toolkit: one numbered criterion per
// function, each printing a single PASS/FAIL line. Run with no argument for
// the full list or with a criterion number for one of them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracles/reference_values.hpp"
#include "rsp/certify.hpp"
#include "rsp/grid.hpp"
#include "rsp/rng.hpp"
#include "rsp/robust.hpp"
#include "rsp/run.hpp"
#include "rsp/scenarios.hpp"
#include "rsp/solver.hpp"
#include "support/test_support.hpp"

namespace {

namespace fs = std::filesystem;
using rsp::certify::GuaranteeMode;
using rsp::testing::data_dir;

struct Check {
  bool ok = true;
  int count = 0;
  std::string first_failure;

  void expect(bool cond, const std::string& message) {
    ++count;
    if (!cond && ok) {
      ok = false;
      first_failure = message;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome from_check(const Check& check, const std::string& pass_detail) {
  if (check.ok) return {true, pass_detail};
  return {false, check.first_failure};
}

// ---------------------------------------------------------------------------
// 1. Sample-complexity integers.

Outcome criterion1() {
  Check check;
  const auto timed = [&](const char* name, long want, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    const long got = fn();
    const double elapsed = seconds_since(start);
    check.expect(got == want, std::string(name) + " = " + std::to_string(got) + ", want " +
                                  std::to_string(want));
    check.expect(elapsed < 1.0, std::string(name) + " took " + fmt1(elapsed) + " s");
    return got;
  };

  timed("prior_min_k(0.01, 1e-3, 2)", 920,
        [] { return rsp::certify::prior_min_k(0.01, 1e-3, 2); });
  timed("min_k_for(posterior_nonconvex, 2)", 3012, [] {
    return rsp::certify::min_k_for(GuaranteeMode::posterior_nonconvex, 2, 0.01, 1e-3);
  });
  timed("min_k_for(improved_nonconvex, 1, s_bar=1)", 1410, [] {
    return rsp::certify::min_k_for(GuaranteeMode::improved_nonconvex, 1, 0.01, 1e-3, 1);
  });

  const auto start = std::chrono::steady_clock::now();
  const long closed[] = {rsp::certify::closed_form_k(0.05, 1e-3, 13),
                         rsp::certify::closed_form_k(0.1, 1e-3, 13),
                         rsp::certify::closed_form_k(0.2, 1e-3, 13),
                         rsp::certify::closed_form_k(0.3, 1e-3, 13),
                         rsp::certify::closed_form_k(0.4, 1e-3, 13),
                         rsp::certify::closed_form_k(0.5, 1e-3, 13)};
  const long want_closed[] = {796, 398, 199, 133, 100, 80};
  for (int i = 0; i < 6; ++i)
    check.expect(closed[i] == want_closed[i],
                 "closed_form_k table entry " + std::to_string(i) + " = " +
                     std::to_string(closed[i]) + ", want " + std::to_string(want_closed[i]));
  check.expect(seconds_since(start) < 1.0, "closed_form_k table took too long");

  const long k1 = timed("min_k_for(posterior_nonconvex, 1)", 2222, [] {
    return rsp::certify::min_k_for(GuaranteeMode::posterior_nonconvex, 1, 0.01, 1e-3);
  });
  check.expect(k1 >= 2210 && k1 <= 2260,
               "min_k_for(posterior_nonconvex, 1) = " + std::to_string(k1) +
                   " outside [2210, 2260]");

  return from_check(check, "all five integer checks exact, each under 1 s");
}

// ---------------------------------------------------------------------------
// 2. Annualization.

Outcome criterion2() {
  Check check;
  const double got = rsp::grid::annualize(500.0, 0.10, 10);
  check.expect(std::fabs(got - 81.3725) <= 1e-3,
               "annualize(500, 0.10, 10) = " + std::to_string(got) + ", want 81.3725 +- 1e-3");
  check.expect(std::fabs(got - rsp::testing::kAnnualize500) <= 1e-9,
               "annualize(500, 0.10, 10) drifted from the frozen oracle value");
  return from_check(check, "annualize(500, 0.10, 10) = " + std::to_string(got));
}

// ---------------------------------------------------------------------------
// 3 and 4 share one instance suite: 52 seeded desk instances cycling through
// the four formulation kinds, solved by both decomposition and the extensive
// form.

struct SolvedInstance {
  rsp::testing::DeskInstance inst;
  rsp::robust::FormulationKind kind;
  rsp::robust::RobustSolution sol;
  double extensive_objective = 0.0;
};

constexpr int kSuiteSize = 52;

double objective_tol(double objective) {
  return std::max(1e-6 * std::fabs(objective), 1e-4);
}

const std::vector<SolvedInstance>& instance_suite(double* elapsed_out) {
  static std::vector<SolvedInstance> suite;
  static double elapsed = 0.0;
  if (suite.empty()) {
    const auto start = std::chrono::steady_clock::now();
    suite.reserve(kSuiteSize);
    const rsp::robust::FormulationKind kinds[4] = {
        {rsp::robust::Objective::cost, rsp::robust::Convexity::convex},
        {rsp::robust::Objective::curtailment, rsp::robust::Convexity::convex},
        {rsp::robust::Objective::cost, rsp::robust::Convexity::nonconvex},
        {rsp::robust::Objective::curtailment, rsp::robust::Convexity::nonconvex},
    };
    for (int i = 0; i < kSuiteSize; ++i) {
      SolvedInstance si;
      si.kind = kinds[i % 4];
      // The quantized extensive form carries one exclusivity binary per
      // candidate, scenario, and hour, so those instances stay smaller.
      const bool quantized = si.kind.convexity == rsp::robust::Convexity::nonconvex;
      si.inst = rsp::testing::random_desk_instance(3000 + static_cast<std::uint64_t>(i), 5,
                                                   quantized ? 12 : 28);
      si.sol = rsp::robust::ccg_solve(si.inst.net, si.inst.set, si.kind);
      si.extensive_objective =
          rsp::robust::extensive_solve(si.inst.net, si.inst.set, si.kind).objective;
      suite.push_back(std::move(si));
    }
    elapsed = seconds_since(start);
  }
  if (elapsed_out) *elapsed_out = elapsed;
  return suite;
}

Outcome criterion3() {
  Check check;
  double elapsed = 0.0;
  const auto& suite = instance_suite(&elapsed);
  int per_kind[4] = {0, 0, 0, 0};
  for (int i = 0; i < kSuiteSize; ++i) {
    const auto& si = suite[static_cast<std::size_t>(i)];
    ++per_kind[i % 4];
    const std::string label = "instance " + std::to_string(i) + " (" +
                              rsp::cli::kind_to_string(si.kind) +
                              ", K=" + std::to_string(si.inst.set.size()) + ")";
    check.expect(si.sol.converged, label + " did not converge");
    const double diff = std::fabs(si.sol.objective - si.extensive_objective);
    check.expect(diff <= objective_tol(si.extensive_objective),
                 label + " objective gap " + std::to_string(diff) + " vs extensive " +
                     std::to_string(si.extensive_objective));
    check.expect(si.sol.lb <= si.sol.ub + objective_tol(si.sol.ub),
                 label + " bound ordering violated");
  }
  for (int k = 0; k < 4; ++k)
    check.expect(per_kind[k] == kSuiteSize / 4, "kind coverage is uneven");
  check.expect(elapsed <= 600.0, "suite took " + fmt1(elapsed) + " s, budget 600 s");
  return from_check(check, std::to_string(kSuiteSize) +
                               " instances, all four kinds, solved and matched in " +
                               fmt1(elapsed) + " s");
}

Outcome criterion4() {
  Check check;
  const auto& suite = instance_suite(nullptr);

  int essential_checked = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    const auto& si = suite[static_cast<std::size_t>(i)];
    const std::string label = "instance " + std::to_string(i);

    rsp::scenarios::ScenarioSet critical;
    for (int idx : si.sol.critical_set)
      critical.scenarios.push_back(si.inst.set.scenarios[static_cast<std::size_t>(idx)]);
    const auto reduced = rsp::robust::ccg_solve(si.inst.net, critical, si.kind);
    check.expect(std::fabs(reduced.objective - si.sol.objective) <=
                     objective_tol(si.sol.objective),
                 label + " critical-set re-solve moved the objective from " +
                     std::to_string(si.sol.objective) + " to " +
                     std::to_string(reduced.objective));

    if (si.kind.convexity != rsp::robust::Convexity::convex) continue;
    const double eq_tol = std::max(1e-6 * std::fabs(si.sol.objective), 1e-3);
    const auto essential = rsp::robust::find_essential(si.inst.net, si.inst.set, si.kind,
                                                       si.sol.critical_set, si.sol.objective,
                                                       eq_tol);
    const int cap = 2 * static_cast<int>(si.inst.net.storage.candidates.size()) + 1;
    check.expect(essential.cardinality() >= 1 && essential.cardinality() <= cap,
                 label + " essential cardinality " + std::to_string(essential.cardinality()) +
                     " outside [1, " + std::to_string(cap) + "]");
    ++essential_checked;
  }

  int dominant_checked = 0;
  const rsp::robust::FormulationKind cost_kind{rsp::robust::Objective::cost,
                                               rsp::robust::Convexity::convex};
  for (int i = 0; i < 5; ++i) {
    auto inst = rsp::testing::random_desk_instance(4000 + static_cast<std::uint64_t>(i), 6, 12);
    const int idx = i % inst.set.size();
    rsp::testing::make_dominant(inst.set, idx);
    const auto sol = rsp::robust::ccg_solve(inst.net, inst.set, cost_kind);
    const double eq_tol = std::max(1e-6 * std::fabs(sol.objective), 1e-3);
    const auto essential = rsp::robust::find_essential(inst.net, inst.set, cost_kind,
                                                       sol.critical_set, sol.objective, eq_tol);
    check.expect(essential.cardinality() == 1,
                 "dominant instance " + std::to_string(i) + " has essential cardinality " +
                     std::to_string(essential.cardinality()));
    check.expect(essential.cardinality() == 1 && essential.indices[0] == idx,
                 "dominant instance " + std::to_string(i) + " kept scenario " +
                     std::to_string(essential.indices.empty() ? -1 : essential.indices[0]) +
                     ", want " + std::to_string(idx));
    ++dominant_checked;
  }

  return from_check(check, "re-solve invariance on " + std::to_string(kSuiteSize) +
                               " instances, cardinality cap on " +
                               std::to_string(essential_checked) + ", singleton on " +
                               std::to_string(dominant_checked) + " dominant instances");
}

// ---------------------------------------------------------------------------
// 5. Out-of-sample guarantee on the shipped desk configuration.

Outcome criterion5() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  const auto config = rsp::cli::load_config(data_dir() + "/configs/desk3_run.json");
  check.expect(config.experiments == 10 && config.eps_bar == 0.05 && config.beta == 1e-3 &&
                   config.test_size == 2000,
               "shipped desk3_run.json no longer carries the reference parameters");

  const auto report = rsp::cli::run_experiments(config);
  check.expect(static_cast<int>(report.rows.size()) == 10, "expected 10 experiment rows");
  int within = 0;
  for (const auto& row : report.rows) {
    if (row.ok && row.epsilon_hat >= 0.0 && row.epsilon_hat <= config.eps_bar) ++within;
  }
  const double elapsed = seconds_since(start);
  check.expect(within >= 9, "only " + std::to_string(within) +
                                "/10 runs kept the violation estimate at or below 0.05");
  check.expect(elapsed <= 900.0, "runs took " + fmt1(elapsed) + " s, budget 900 s");
  return from_check(check, std::to_string(within) +
                               "/10 runs within eps_bar on 2000-scenario tests in " +
                               fmt1(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 6. Formula cross-checks.

Outcome criterion6() {
  Check check;

  const int fracs[][2] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4},
                          {1, 5}, {2, 5}, {3, 5}, {4, 5}};
  for (int K = 1; K <= 30; ++K)
    for (int d = 1; d <= K; ++d)
      for (const auto& f : fracs) {
        const long double want = rsp::testing::exact_binom_tail(K, d, f[0], f[1]);
        const double got = rsp::certify::binom_tail(
            K, d, static_cast<double>(f[0]) / static_cast<double>(f[1]));
        check.expect(std::fabs(got - static_cast<double>(want)) <= 1e-12,
                     "binom_tail(" + std::to_string(K) + ", " + std::to_string(d) + ", " +
                         std::to_string(f[0]) + "/" + std::to_string(f[1]) +
                         ") off the exact rational oracle");
      }

  const double betas[] = {1e-3, 1e-2, 1e-1};
  const int ks[] = {0, 1, 2, 5, 10, 25};
  const long Ks[] = {50, 200, 920, 5000};
  for (double beta : betas)
    for (int k : ks)
      for (long K : Ks) {
        if (k >= K) continue;
        const double e = rsp::certify::posterior_convex_eps(k, beta, K);
        const long double t = 1.0L - static_cast<long double>(e);
        long double term = 1.0L, sum = 1.0L;
        for (long i = k + 1; i <= K; ++i) {
          term *= static_cast<long double>(i) / static_cast<long double>(i - k) * t;
          sum += term;
          if (sum > 1e300L) {
            sum *= 1e-300L;
            term *= 1e-300L;
          }
        }
        const long double lhs =
            static_cast<long double>(beta) / static_cast<long double>(K + 1) * sum;
        const long double res = std::fabs(lhs - term) / std::max(lhs, term);
        check.expect(static_cast<double>(res) <= 1e-9,
                     "posterior_convex_eps root residual " + std::to_string((double)res) +
                         " at k=" + std::to_string(k) + ", K=" + std::to_string(K));
      }

  for (long K = 100; K <= 2000; K += 100) {
    check.expect(rsp::certify::binom_tail(K + 100, 3, 0.02) < rsp::certify::binom_tail(K, 3, 0.02),
                 "binom_tail not decreasing in K near K=" + std::to_string(K));
    check.expect(rsp::certify::prior_eps(3, 1e-3, K + 100) < rsp::certify::prior_eps(3, 1e-3, K),
                 "prior_eps not decreasing in K near K=" + std::to_string(K));
    check.expect(rsp::certify::posterior_convex_eps(2, 1e-3, K + 100) <
                     rsp::certify::posterior_convex_eps(2, 1e-3, K),
                 "posterior_convex_eps not decreasing in K near K=" + std::to_string(K));
    check.expect(rsp::certify::posterior_nonconvex_eps(2, 1e-3, K + 100) <
                     rsp::certify::posterior_nonconvex_eps(2, 1e-3, K),
                 "posterior_nonconvex_eps not decreasing in K near K=" + std::to_string(K));
  }
  for (int k = 0; k < 20; ++k) {
    check.expect(rsp::certify::posterior_convex_eps(k, 1e-3, 600) <
                     rsp::certify::posterior_convex_eps(k + 1, 1e-3, 600),
                 "posterior_convex_eps not increasing in k at k=" + std::to_string(k));
    check.expect(rsp::certify::posterior_nonconvex_eps(k, 1e-3, 600) <
                     rsp::certify::posterior_nonconvex_eps(k + 1, 1e-3, 600),
                 "posterior_nonconvex_eps not increasing in k at k=" + std::to_string(k));
  }
  for (int d = 1; d < 15; ++d)
    check.expect(rsp::certify::prior_eps(d, 1e-3, 3000) < rsp::certify::prior_eps(d + 1, 1e-3, 3000),
                 "prior_eps not increasing in d at d=" + std::to_string(d));

  return from_check(check, std::to_string(check.count) + " comparisons against oracles and grids");
}

// ---------------------------------------------------------------------------
// 7. Solver core against enumeration oracles.

Outcome criterion7() {
  Check check;

  int lp_feasible = 0, lp_infeasible = 0;
  for (int i = 0; i < 200; ++i) {
    auto stream = rsp::rng::Stream::derive(7777, static_cast<std::uint64_t>(i));
    const auto lp = rsp::testing::random_oracle_lp(stream);
    const auto want = rsp::testing::solve_lp_by_vertices(lp);
    auto model = rsp::testing::lp_to_model(lp);
    const auto got = rsp::solver::solve_lp(model);
    const std::string label = "LP instance " + std::to_string(i);
    if (want.feasible) {
      ++lp_feasible;
      check.expect(got.status == rsp::solver::SolveStatus::optimal, label + " should be optimal");
      check.expect(std::fabs(got.objective - want.objective) <=
                       1e-6 * (1.0 + std::fabs(want.objective)),
                   label + " objective " + std::to_string(got.objective) + " vs oracle " +
                       std::to_string(want.objective));
    } else {
      ++lp_infeasible;
      check.expect(got.status == rsp::solver::SolveStatus::infeasible,
                   label + " should be infeasible");
    }
  }
  check.expect(lp_feasible >= 80 && lp_infeasible >= 5, "LP instance mix is degenerate");

  int mip_feasible = 0, mip_infeasible = 0;
  for (int i = 0; i < 100; ++i) {
    auto stream = rsp::rng::Stream::derive(8888, static_cast<std::uint64_t>(i));
    const auto mip = rsp::testing::random_oracle_mip(stream);
    const auto want = rsp::testing::solve_mip_by_enumeration(mip);
    auto model = rsp::testing::mip_to_model(mip);
    const auto got = rsp::solver::solve_mip(model);
    const std::string label = "MIP instance " + std::to_string(i);
    if (want.feasible) {
      ++mip_feasible;
      check.expect(got.status == rsp::solver::SolveStatus::optimal, label + " should be optimal");
      check.expect(std::fabs(got.objective - want.objective) <=
                       1e-6 * (1.0 + std::fabs(want.objective)),
                   label + " objective " + std::to_string(got.objective) + " vs oracle " +
                       std::to_string(want.objective));
    } else {
      ++mip_infeasible;
      check.expect(got.status == rsp::solver::SolveStatus::infeasible,
                   label + " should be infeasible");
    }
  }
  check.expect(mip_feasible >= 40 && mip_infeasible >= 3, "MIP instance mix is degenerate");

  return from_check(check, "200 LP (" + std::to_string(lp_feasible) + " feasible) and 100 MIP (" +
                               std::to_string(mip_feasible) + " feasible) instances matched");
}

// ---------------------------------------------------------------------------
// 8. Operational invariants across random (plan, scenario) pairs.

double balance_residual(const rsp::grid::NetworkCase& net,
                        const rsp::scenarios::DailyScenario& sc,
                        const rsp::robust::OperationOutcome& oc) {
  const int B = static_cast<int>(net.buses.size());
  const int T = net.horizon;
  double worst = 0.0;
  for (int b = 0; b < B; ++b) {
    for (int t = 0; t < T; ++t) {
      double lhs = oc.shed.at(b, t);
      for (int g = 0; g < static_cast<int>(net.generators.size()); ++g)
        if (net.generators[g].bus == b) lhs += oc.gen.at(g, t);
      for (int s = 0; s < static_cast<int>(net.storage.candidates.size()); ++s)
        if (net.storage.candidates[s] == b) lhs += oc.discharge.at(s, t) - oc.charge.at(s, t);
      for (int l = 0; l < static_cast<int>(net.lines.size()); ++l) {
        if (net.lines[l].to_bus == b) lhs += oc.flow.at(l, t);
        if (net.lines[l].from_bus == b) lhs -= oc.flow.at(l, t);
      }
      double rhs = sc.load_factor.at(b, t) * net.peak_load(b);
      for (int f = 0; f < static_cast<int>(net.wind_farms.size()); ++f)
        if (net.wind_farms[f].bus == b) rhs -= sc.wind_factor.at(f, t) * net.wind_farms[f].capacity;
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  return worst;
}

Outcome criterion8() {
  Check check;
  const rsp::robust::FormulationKind kind{rsp::robust::Objective::cost,
                                          rsp::robust::Convexity::convex};
  const int pairs_per_case = 5000;

  struct CaseBundle {
    rsp::grid::NetworkCase net;
    rsp::scenarios::ScenarioSet pool;
    rsp::robust::StoragePlan demo_plan;
  };
  std::vector<CaseBundle> cases;
  for (const char* name : {"desk3.json", "demo6.json"}) {
    CaseBundle bundle;
    bundle.net = rsp::grid::load_case(data_dir() + "/cases/" + name);
    const auto models =
        rsp::cli::load_generator_models(data_dir() + "/profiles/generator.json", bundle.net);
    bundle.pool = rsp::scenarios::sample_iid(models, pairs_per_case,
                                             rsp::rng::hash64(0xacc8, cases.size()));
    rsp::scenarios::ScenarioSet train;
    train.scenarios.assign(bundle.pool.scenarios.begin(), bundle.pool.scenarios.begin() + 3);
    bundle.demo_plan = rsp::robust::ccg_solve(bundle.net, train, kind).plan;
    cases.push_back(std::move(bundle));
  }

  long infeasible = 0, simultaneous = 0, demo_pairs = 0;
  double worst_balance = 0.0, worst_soc_under = 0.0, worst_soc_over = 0.0;
  auto plan_rng = rsp::rng::Stream::derive(0xacc8, 99);

  for (int i = 0; i < 2 * pairs_per_case; ++i) {
    const auto& bundle = cases[static_cast<std::size_t>(i % 2)];
    const auto& net = bundle.net;
    const auto& sc = bundle.pool.scenarios[static_cast<std::size_t>(i / 2)];
    const auto& st = net.storage;

    rsp::robust::StoragePlan plan;
    const bool demo = i % 4 == 3;
    if (demo) {
      plan = bundle.demo_plan;
      ++demo_pairs;
    } else {
      for (std::size_t s = 0; s < st.candidates.size(); ++s) {
        const double e = plan_rng.next_unit() * st.unit_energy * st.max_units_per_bus;
        const double p = st.rho_min * e + plan_rng.next_unit() * (st.rho_max - st.rho_min) * e;
        plan.energy.push_back(e);
        plan.power.push_back(p);
      }
    }

    rsp::robust::OperationOutcome oc;
    try {
      oc = rsp::robust::evaluate_operation(net, plan, sc, kind);
    } catch (const rsp::Error&) {
      ++infeasible;
      continue;
    }

    worst_balance = std::max(worst_balance, balance_residual(net, sc, oc));
    for (int s = 0; s < oc.soc.rows; ++s)
      for (int t = 0; t < oc.soc.cols; ++t) {
        worst_soc_under = std::max(worst_soc_under, -oc.soc.at(s, t));
        worst_soc_over =
            std::max(worst_soc_over, oc.soc.at(s, t) - plan.energy[static_cast<std::size_t>(s)]);
      }
    if (demo) {
      for (int s = 0; s < oc.charge.rows; ++s)
        for (int t = 0; t < oc.charge.cols; ++t)
          if (oc.charge.at(s, t) > 1e-6 && oc.discharge.at(s, t) > 1e-6) ++simultaneous;
    }
  }

  check.expect(infeasible == 0, std::to_string(infeasible) + " infeasible second stages");
  check.expect(worst_balance <= 1e-7,
               "worst balance residual " + std::to_string(worst_balance) + " MW");
  check.expect(worst_soc_under <= 1e-7 && worst_soc_over <= 1e-7,
               "state of charge left [0, E] by " +
                   std::to_string(std::max(worst_soc_under, worst_soc_over)) + " MWh");
  check.expect(simultaneous == 0,
               std::to_string(simultaneous) + " simultaneous charge/discharge hours on the demo plans");
  return from_check(check, std::to_string(2 * pairs_per_case) + " pairs clean (" +
                               std::to_string(demo_pairs) + " on demo plans)");
}

// ---------------------------------------------------------------------------
// 9. Byte-identical reports for identical configurations.

Outcome criterion9() {
  Check check;
  auto config = rsp::cli::load_config(data_dir() + "/configs/desk3_run.json");
  config.experiments = 3;
  config.test_size = 300;

  const fs::path base = fs::temp_directory_path() / "rsp_acceptance_determinism";
  std::error_code ec;
  fs::remove_all(base, ec);

  const auto report_a = rsp::cli::run_experiments(config);
  const auto files_a = rsp::cli::emit_reports(report_a, (base / "a").string());
  const auto report_b = rsp::cli::run_experiments(config);
  const auto files_b = rsp::cli::emit_reports(report_b, (base / "b").string());

  check.expect(files_a.size() == files_b.size(), "report file lists differ in length");
  for (std::size_t i = 0; i < files_a.size() && i < files_b.size(); ++i) {
    const auto name_a = fs::path(files_a[i]).filename().string();
    const auto name_b = fs::path(files_b[i]).filename().string();
    check.expect(name_a == name_b, "report file names differ: " + name_a + " vs " + name_b);
    check.expect(rsp::testing::read_file(files_a[i]) == rsp::testing::read_file(files_b[i]),
                 name_a + " differs between the two runs");
  }
  const std::size_t count = files_a.size();
  fs::remove_all(base, ec);
  return from_check(check, std::to_string(count) + " report files byte-identical across two runs");
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* description;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "sample-complexity integers match the frozen oracle values", criterion1},
    {2, "annualized storage cost matches the reference factor", criterion2},
    {3, "decomposition matches the extensive form on seeded instances", criterion3},
    {4, "critical and essential scenario sets keep their invariants", criterion4},
    {5, "out-of-sample risk meets the target across repeated experiments", criterion5},
    {6, "probability formulas match high-precision oracles", criterion6},
    {7, "LP and MIP solvers match the enumeration oracles", criterion7},
    {8, "second-stage dispatch invariants hold on random pairs", criterion8},
    {9, "identical configurations emit byte-identical reports", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 9) {
      std::fprintf(stderr, "usage: %s [criterion 1-9]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.number != only) continue;
    Outcome outcome;
    try {
      outcome = criterion.fn();
    } catch (const std::exception& ex) {
      outcome = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("criterion %d: %s - %s (%s)\n", criterion.number,
                outcome.pass ? "PASS" : "FAIL", criterion.description, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
