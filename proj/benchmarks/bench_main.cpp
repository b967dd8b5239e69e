#include <benchmark/benchmark.h>

#include <cstdint>

#include "rsp/certify.hpp"
#include "rsp/grid.hpp"
#include "rsp/robust.hpp"
#include "rsp/run.hpp"
#include "rsp/scenarios.hpp"
#include "rsp/solver.hpp"

namespace {

rsp::grid::NetworkCase desk3() {
  static const auto net = rsp::grid::load_case(std::string(RSP_BENCH_DATA_DIR) + "/cases/desk3.json");
  return net;
}

rsp::scenarios::ScenarioSet desk3_days(int count, std::uint64_t seed) {
  const auto net = desk3();
  const auto models = rsp::cli::load_generator_models(
      std::string(RSP_BENCH_DATA_DIR) + "/profiles/generator.json", net);
  return rsp::scenarios::sample_iid(models, count, seed);
}

rsp::robust::StoragePlan mid_plan(const rsp::grid::NetworkCase& net) {
  rsp::robust::StoragePlan plan;
  for (std::size_t s = 0; s < net.storage.candidates.size(); ++s) {
    plan.energy.push_back(20.0);
    plan.power.push_back(5.0);
  }
  return plan;
}

void BM_SecondStageBuild(benchmark::State& state) {
  const auto net = desk3();
  const auto plan = mid_plan(net);
  const auto day = desk3_days(1, 7).scenarios[0];
  const rsp::robust::FormulationKind kind{rsp::robust::Objective::cost,
                                          rsp::robust::Convexity::convex};
  for (auto _ : state) {
    auto stage = rsp::robust::build_second_stage(net, plan, day, kind);
    benchmark::DoNotOptimize(stage.model);
  }
}
BENCHMARK(BM_SecondStageBuild);

void BM_SecondStageSolve(benchmark::State& state) {
  const auto net = desk3();
  const auto plan = mid_plan(net);
  const auto day = desk3_days(1, 7).scenarios[0];
  const rsp::robust::FormulationKind kind{rsp::robust::Objective::cost,
                                          rsp::robust::Convexity::convex};
  for (auto _ : state) {
    const auto outcome = rsp::robust::evaluate_operation(net, plan, day, kind);
    benchmark::DoNotOptimize(outcome.total_cost);
  }
}
BENCHMARK(BM_SecondStageSolve);

void BM_CcgSolveSmallSet(benchmark::State& state) {
  const auto net = desk3();
  const auto set = desk3_days(static_cast<int>(state.range(0)), 11);
  const rsp::robust::FormulationKind kind{rsp::robust::Objective::cost,
                                          rsp::robust::Convexity::convex};
  for (auto _ : state) {
    const auto sol = rsp::robust::ccg_solve(net, set, kind);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_CcgSolveSmallSet)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BinomTail(benchmark::State& state) {
  const long K = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(rsp::certify::binom_tail(K, 5, 0.01));
}
BENCHMARK(BM_BinomTail)->Arg(920)->Arg(10000);

void BM_MinKForNonconvex(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsp::certify::min_k_for(
        rsp::certify::GuaranteeMode::posterior_nonconvex, 1, 0.01, 1e-3));
  }
}
BENCHMARK(BM_MinKForNonconvex);

void BM_PosteriorConvexEps(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(rsp::certify::posterior_convex_eps(3, 1e-3, state.range(0)));
}
BENCHMARK(BM_PosteriorConvexEps)->Arg(920)->Arg(10000);

void BM_SyntheticDay(benchmark::State& state) {
  const auto net = desk3();
  const auto models = rsp::cli::load_generator_models(
      std::string(RSP_BENCH_DATA_DIR) + "/profiles/generator.json", net);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto set = rsp::scenarios::sample_iid(models, 1, ++seed);
    benchmark::DoNotOptimize(set.scenarios[0].load_factor);
  }
}
BENCHMARK(BM_SyntheticDay);

}  // namespace

BENCHMARK_MAIN();
