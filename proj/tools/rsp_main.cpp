// Command-line front end: gen, plan, certify, run, experiments, sweep-budget,
// eval. One JSON config file plus flag overrides; outputs land under --out.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "rsp/certify.hpp"
#include "rsp/run.hpp"

namespace {

namespace fs = std::filesystem;
using namespace rsp;

void setup_logging() {
  const char* level = std::getenv("RSP_LOG");
  if (level == nullptr) {
    spdlog::set_level(spdlog::level::info);
    return;
  }
  const auto parsed = spdlog::level::from_str(level);
  // from_str returns "off" for unrecognized names; accept it only when asked for.
  if (parsed == spdlog::level::off && std::string(level) != "off") {
    spdlog::set_level(spdlog::level::info);
    spdlog::warn("RSP_LOG={} not recognized, using info", level);
    return;
  }
  spdlog::set_level(parsed);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json solution_json(const robust::RobustSolution& sol) {
  nlohmann::json j;
  j["plan"] = nlohmann::json::parse(robust::plan_to_json_text(sol.plan));
  j["gamma"] = sol.gamma;
  j["objective"] = sol.objective;
  j["lb"] = sol.lb;
  j["ub"] = sol.ub;
  j["critical_set"] = sol.critical_set;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  return j;
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> kind;

  cli::RunConfig load() const {
    cli::RunConfig config = cli::load_config(config_path);
    if (seed) config.seed = *seed;
    if (out) config.out_dir = *out;
    if (kind) config.kind = cli::kind_from_string(*kind);
    return config;
  }
};

std::shared_ptr<CommonFlags> add_common(CLI::App* sub) {
  auto flags = std::make_shared<CommonFlags>();
  sub->add_option("config", flags->config_path, "run configuration JSON")->required();
  sub->add_option("--seed", flags->seed, "master seed override");
  sub->add_option("--out", flags->out, "output directory override");
  sub->add_option("--kind", flags->kind,
                  "formulation override: c-cost, nc-cost, c-curtailment, nc-curtailment");
  return flags;
}

void write_out(const cli::RunConfig& config, const std::string& name, const std::string& text) {
  const std::string path = (fs::path(config.out_dir) / name).string();
  cli::write_text_atomic(path, text);
  std::cout << "wrote " << path << "\n";
}

int run_gen(const CommonFlags& flags, int count) {
  const auto config = flags.load();
  const auto net = grid::load_case(config.case_path);
  const int n = count > 0 ? count : config.train_size;
  const auto set = cli::make_scenarios(config, net, n, config.seed);
  const std::string path = (fs::path(config.out_dir) / "scenarios.csv").string();
  fs::create_directories(config.out_dir);
  scenarios::save_profiles(set, path);
  std::cout << "wrote " << path << " (" << set.size() << " scenarios)\n";
  return 0;
}

int run_plan(const CommonFlags& flags) {
  const auto config = flags.load();
  const auto net = grid::load_case(config.case_path);
  const auto train = cli::make_scenarios(config, net, config.train_size, config.seed);
  robust::SolveSettings settings;
  settings.cyclic_soc = config.cyclic_soc;
  const auto sol =
      robust::ccg_solve(net, train, config.kind, config.gap_tol, config.max_iter, settings);
  write_out(config, "plan.json", robust::plan_to_json_text(sol.plan));
  write_out(config, "solution.json", solution_json(sol).dump(2) + "\n");
  std::cout << "objective " << sol.objective << ", gamma* " << sol.gamma << ", investment "
            << robust::investment_cost(net, sol.plan) << "\n";
  return 0;
}

int run_certify(const CommonFlags& flags, std::optional<int> k, std::optional<long> K,
                std::optional<double> eps_bar, std::optional<double> beta) {
  const auto config = flags.load();
  const double eb = eps_bar.value_or(config.eps_bar);
  const double b = beta.value_or(config.beta);
  const int kk = k.value_or(config.initial_k_guess);
  long sample = 0;
  if (K) {
    sample = *K;
  } else {
    sample = certify::min_k_for(config.mode, kk, eb, b, config.s_bar);
    std::cout << "min sample size K=" << sample << " for eps_bar=" << eb << ", beta=" << b
              << ", k=" << kk << ", mode=" << certify::to_string(config.mode) << "\n";
  }
  const auto cert = certify::make_certificate(config.mode, kk, b, sample, config.s_bar);
  write_out(config, "certificate.json", certify::certificate_to_json_text(cert));
  std::cout << "epsilon " << cert.epsilon << " at K=" << cert.K << "\n";
  return 0;
}

int run_run(const CommonFlags& flags) {
  const auto config = flags.load();
  const auto run = cli::run_with_guarantee(config);
  write_out(config, "plan.json", robust::plan_to_json_text(run.solution.plan));
  write_out(config, "certificate.json", certify::certificate_to_json_text(run.certificate));
  nlohmann::json j;
  j["solution"] = solution_json(run.solution);
  j["certificate"] = nlohmann::json::parse(certify::certificate_to_json_text(run.certificate));
  j["essential"] = run.essential.indices;
  j["guess_history"] = run.guess_history;
  j["passes"] = run.passes;
  if (run.epsilon_hat >= 0.0) {
    j["epsilon_hat"] = run.epsilon_hat;
    j["test_size"] = run.test_size;
  }
  write_out(config, "run.json", j.dump(2) + "\n");
  std::cout << "certified eps=" << run.certificate.epsilon << " (K=" << run.certificate.K
            << ", support " << run.essential.cardinality() << ")";
  if (run.epsilon_hat >= 0.0) std::cout << ", out-of-sample " << run.epsilon_hat;
  std::cout << "\n";
  return 0;
}

int run_experiments_cmd(const CommonFlags& flags) {
  const auto config = flags.load();
  const auto report = cli::run_experiments(config);
  for (const auto& path : cli::emit_reports(report, config.out_dir))
    std::cout << "wrote " << path << "\n";
  std::cout << "selected experiment " << report.selected << " (" << report.selection_rule
            << ")\n";
  return 0;
}

int run_sweep(const CommonFlags& flags) {
  const auto config = flags.load();
  const auto report = cli::sweep_budget(config);
  for (const auto& path : cli::emit_reports(report, config.out_dir))
    std::cout << "wrote " << path << "\n";
  if (report.zero_index >= 0)
    std::cout << "zero curtailment first reached at budget "
              << report.points[static_cast<std::size_t>(report.zero_index)].budget << "\n";
  else
    std::cout << "grid exhausted without reaching zero curtailment\n";
  return 0;
}

int run_eval(const CommonFlags& flags, const std::string& plan_path, double gamma) {
  const auto config = flags.load();
  const auto net = grid::load_case(config.case_path);
  const auto plan = robust::plan_from_json_text(read_text_file(plan_path));
  if (config.test_size < 1) throw ConfigError("eval: test_size must be >= 1");
  const auto test = cli::make_scenarios(config, net, static_cast<int>(config.test_size),
                                        rng::hash64(config.seed, 0xe7a1));
  robust::SolveSettings settings;
  settings.cyclic_soc = config.cyclic_soc;
  const auto est = certify::estimate_violation(net, plan, gamma, test, config.kind, {}, settings);
  nlohmann::json j;
  j["violations"] = est.violations;
  j["trials"] = est.trials;
  j["epsilon_hat"] = est.epsilon_hat;
  j["gamma_threshold"] = est.gamma_threshold;
  write_out(config, "risk.json", j.dump(2) + "\n");
  std::cout << "epsilon_hat " << est.epsilon_hat << " (" << est.violations << "/" << est.trials
            << " above gamma=" << gamma << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"robust energy-storage planning with scenario-approach guarantees"};
  app.require_subcommand(1);
  int exit_code = 0;

  auto* gen = app.add_subcommand("gen", "sample scenarios to a CSV file");
  auto gen_flags = add_common(gen);
  auto gen_count = std::make_shared<int>(0);
  gen->add_option("--count", *gen_count, "scenario count (default: train_size)");
  gen->callback([&exit_code, gen_flags, gen_count] { exit_code = run_gen(*gen_flags, *gen_count); });

  auto* plan = app.add_subcommand("plan", "robust plan on a fixed training set");
  auto plan_flags = add_common(plan);
  plan->callback([&exit_code, plan_flags] { exit_code = run_plan(*plan_flags); });

  auto* cert = app.add_subcommand("certify", "sample sizes and risk levels");
  auto cert_flags = add_common(cert);
  auto cert_k = std::make_shared<std::optional<int>>();
  auto cert_K = std::make_shared<std::optional<long>>();
  auto cert_eps = std::make_shared<std::optional<double>>();
  auto cert_beta = std::make_shared<std::optional<double>>();
  cert->add_option("--k", *cert_k, "support cardinality (or dimension for the prior mode)");
  cert->add_option("--samples", *cert_K, "evaluate the risk level at this sample size");
  cert->add_option("--eps-bar", *cert_eps, "target risk level override");
  cert->add_option("--beta", *cert_beta, "confidence override");
  cert->callback([&exit_code, cert_flags, cert_k, cert_K, cert_eps, cert_beta] {
    exit_code = run_certify(*cert_flags, *cert_k, *cert_K, *cert_eps, *cert_beta);
  });

  auto* run = app.add_subcommand("run", "full guarantee loop: size, plan, reduce, certify");
  auto run_flags = add_common(run);
  run->callback([&exit_code, run_flags] { exit_code = run_run(*run_flags); });

  auto* exps = app.add_subcommand("experiments", "repeated seeded guarantee runs with reports");
  auto exps_flags = add_common(exps);
  exps->callback([&exit_code, exps_flags] { exit_code = run_experiments_cmd(*exps_flags); });

  auto* sweep = app.add_subcommand("sweep-budget", "curtailment vs budget sweep");
  auto sweep_flags = add_common(sweep);
  sweep->callback([&exit_code, sweep_flags] { exit_code = run_sweep(*sweep_flags); });

  auto* eval = app.add_subcommand("eval", "out-of-sample risk of an existing plan");
  auto eval_flags = add_common(eval);
  auto eval_plan = std::make_shared<std::string>();
  auto eval_gamma = std::make_shared<double>(0.0);
  eval->add_option("--plan", *eval_plan, "plan JSON path")->required();
  eval->add_option("--gamma", *eval_gamma, "violation threshold (default 0)");
  eval->callback([&exit_code, eval_flags, eval_plan, eval_gamma] {
    exit_code = run_eval(*eval_flags, *eval_plan, *eval_gamma);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const cli::GuaranteeExhausted& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const ParseError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 4;
  } catch (const std::exception& e) {
    spdlog::error("unexpected: {}", e.what());
    return 4;
  }
  return exit_code;
}
