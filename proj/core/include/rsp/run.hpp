#pragma once

// Orchestration: run configuration, the guarantee loop (guess support size,
// size the sample, plan, reduce, certify, re-guess), repeated seeded
// experiments, curtailment budget sweeps, and report emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsp/certify.hpp"
#include "rsp/common.hpp"
#include "rsp/robust.hpp"

namespace rsp::cli {

enum class ScenarioSourceKind { file, generator };

struct ScenarioSource {
  ScenarioSourceKind kind = ScenarioSourceKind::generator;
  std::string path;
};

struct RunConfig {
  std::string case_path;
  ScenarioSource source;
  robust::FormulationKind kind;
  certify::GuaranteeMode mode = certify::GuaranteeMode::posterior_convex;
  double eps_bar = 0.05;
  double beta = 1e-3;
  int initial_k_guess = 1;
  std::uint64_t seed = 1;
  int experiments = 1;
  std::vector<double> budget_grid;  // $/yr points for sweep_budget, increasing
  double gap_tol = 1e-6;
  int max_iter = 100;
  int train_size = 20;   // scenario count for fixed-size operations
  long test_size = 2000; // out-of-sample estimate size; 0 skips the estimate
  std::optional<long> s_bar;
  bool cyclic_soc = false;
  std::string out_dir = "out";
};

// Compact formulation tags: c-cost, nc-cost, c-curtailment, nc-curtailment.
std::string kind_to_string(robust::FormulationKind kind);
robust::FormulationKind kind_from_string(const std::string& text);

RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& config);

// Reads a config file; relative case/scenario paths resolve against the
// config file's directory.
RunConfig load_config(const std::string& path);

// Wind/load generator descriptor JSON; the farm count comes from the case.
scenarios::GeneratorModels load_generator_models(const std::string& path,
                                                 const grid::NetworkCase& net);

// `count` i.i.d. scenarios from the configured source. A file source is an
// empirical pool resampled with replacement; a generator source synthesizes.
scenarios::ScenarioSet make_scenarios(const RunConfig& config, const grid::NetworkCase& net,
                                      int count, std::uint64_t seed);

// The guarantee loop ran out of support-size guesses; `history` records the
// essential-set cardinality of each rejected pass.
struct GuaranteeExhausted : Error {
  explicit GuaranteeExhausted(const std::string& what, std::vector<int> history_)
      : Error(what), history(std::move(history_)) {}
  std::vector<int> history;
};

struct GuaranteeRun {
  robust::RobustSolution solution;
  certify::GuaranteeCertificate certificate;
  robust::EssentialSet essential;
  std::vector<int> guess_history;  // accepted pass last
  int passes = 0;
  double epsilon_hat = -1.0;  // out-of-sample estimate, -1 when skipped
  long test_size = 0;
};

// Guess k; K <- min_k_for; draw K fresh i.i.d. scenarios; plan via
// column-and-constraint generation; reduce to the essential set; recompute
// the risk level at the observed cardinality. Accept when it meets eps_bar,
// otherwise re-guess k as that cardinality (at most 5 passes).
GuaranteeRun run_with_guarantee(const RunConfig& config, const grid::NetworkCase& net,
                                std::uint64_t seed);
GuaranteeRun run_with_guarantee(const RunConfig& config);

struct ExperimentRow {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  robust::StoragePlan plan;
  double gamma = 0.0;
  double objective = 0.0;
  double investment = 0.0;
  int essential_size = 0;
  certify::GuaranteeCertificate certificate;
  double epsilon_hat = -1.0;
  int passes = 0;
};

struct ExperimentReport {
  RunConfig config;
  std::vector<ExperimentRow> rows;
  int selected = -1;
  std::string selection_rule;
};

// Independent runs with seeds derived from the master seed. Per-row failures
// are captured; the report is emitted as long as one run succeeds. Selection:
// least investment among certified rows (cost kind), or least investment
// among certified rows that eliminate curtailment (curtailment kind).
ExperimentReport run_experiments(const RunConfig& config);

struct SweepPoint {
  double budget = 0.0;
  double gamma_star = 0.0;   // worst-case curtailment on the training set, MWh
  double epsilon_hat = -1.0; // out-of-sample LOLP-style estimate
  double investment = 0.0;
};

struct SweepReport {
  RunConfig config;
  std::vector<SweepPoint> points;
  int zero_index = -1;      // first grid point with gamma_star = 0 within tol
  double zero_tol = 1e-6;   // MWh
};

// Curtailment kind only: re-plans on one shared training set per budget
// point and reports worst-case curtailment plus its out-of-sample estimate.
SweepReport sweep_budget(const RunConfig& config);

std::string experiment_report_to_json_text(const ExperimentReport& report);
std::string sweep_report_to_json_text(const SweepReport& report);

// Atomic (temp-and-rename) text file write.
void write_text_atomic(const std::string& path, const std::string& content);

// JSON dump, CSV tables, and SVG charts under out_dir. Deterministic bytes
// for identical inputs. Empty row lists produce headers-only CSVs and no SVG.
std::vector<std::string> emit_reports(const ExperimentReport& report, const std::string& out_dir);
std::vector<std::string> emit_reports(const SweepReport& report, const std::string& out_dir);

}  // namespace rsp::cli
