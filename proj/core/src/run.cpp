#include "rsp/run.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace rsp::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kMaxGuesses = 5;
constexpr long kMaxTrainingSamples = 100000;  // every C&CG iteration scans the whole set
constexpr double kZeroShedTol = 1e-6;         // MWh

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string resolve_against(const fs::path& dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (dir / p).lexically_normal().string();
}

void validate_config(const RunConfig& config) {
  if (config.case_path.empty()) throw ConfigError("config: missing case path");
  if (config.source.path.empty()) throw ConfigError("config: missing scenario source path");
  if (!(config.eps_bar > 0.0 && config.eps_bar < 1.0))
    throw ConfigError("config: eps_bar must lie in (0,1)");
  if (!(config.beta > 0.0 && config.beta < 1.0)) throw ConfigError("config: beta must lie in (0,1)");
  if (config.experiments < 1) throw ConfigError("config: experiments must be >= 1");
  if (config.initial_k_guess < 0) throw ConfigError("config: initial_k_guess must be >= 0");
  if (!(config.gap_tol > 0.0)) throw ConfigError("config: gap_tol must be > 0");
  if (config.max_iter < 1) throw ConfigError("config: max_iter must be >= 1");
  if (config.train_size < 1) throw ConfigError("config: train_size must be >= 1");
  if (config.test_size < 0) throw ConfigError("config: test_size must be >= 0");
  const bool convex_mode = config.mode == certify::GuaranteeMode::prior_convex ||
                           config.mode == certify::GuaranteeMode::posterior_convex;
  if (convex_mode && config.kind.convexity != robust::Convexity::convex)
    throw ConfigError(std::string("config: mode ") + certify::to_string(config.mode) +
                      " requires the convex formulation");
  if (config.mode == certify::GuaranteeMode::improved_nonconvex && !config.s_bar)
    throw ConfigError("config: improved_nonconvex mode requires s_bar");
  if (config.s_bar && *config.s_bar < 1) throw ConfigError("config: s_bar must be >= 1");
}

robust::SolveSettings settings_of(const RunConfig& config) {
  robust::SolveSettings settings;
  settings.cyclic_soc = config.cyclic_soc;
  return settings;
}

}  // namespace

std::string kind_to_string(robust::FormulationKind kind) {
  std::string tag = kind.convexity == robust::Convexity::convex ? "c-" : "nc-";
  tag += kind.objective == robust::Objective::cost ? "cost" : "curtailment";
  return tag;
}

robust::FormulationKind kind_from_string(const std::string& text) {
  robust::FormulationKind kind;
  std::string rest;
  if (text.rfind("nc-", 0) == 0) {
    kind.convexity = robust::Convexity::nonconvex;
    rest = text.substr(3);
  } else if (text.rfind("c-", 0) == 0) {
    kind.convexity = robust::Convexity::convex;
    rest = text.substr(2);
  } else {
    throw ConfigError("unknown formulation kind: " + text + " (want c-/nc- prefix)");
  }
  if (rest == "cost")
    kind.objective = robust::Objective::cost;
  else if (rest == "curtailment" || rest == "curt")
    kind.objective = robust::Objective::curtailment;
  else
    throw ConfigError("unknown formulation objective: " + text);
  return kind;
}

RunConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("config JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON: top level must be an object");
  static const std::vector<std::string> known = {
      "case",     "scenarios",   "kind",       "mode",       "eps_bar",    "beta",
      "initial_k_guess", "seed", "experiments", "budget_grid", "gap_tol",  "max_iter",
      "train_size", "test_size", "s_bar",      "cyclic_soc", "out"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config JSON: unknown key \"" + key + "\"");
  }
  RunConfig config;
  try {
    config.case_path = j.at("case").get<std::string>();
    const auto& src = j.at("scenarios");
    const std::string source_kind = src.at("source").get<std::string>();
    if (source_kind == "file")
      config.source.kind = ScenarioSourceKind::file;
    else if (source_kind == "generator")
      config.source.kind = ScenarioSourceKind::generator;
    else
      throw ConfigError("config JSON: scenarios.source must be \"file\" or \"generator\"");
    config.source.path = src.at("path").get<std::string>();
    if (j.contains("kind")) config.kind = kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("mode"))
      config.mode = certify::mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("eps_bar")) config.eps_bar = j.at("eps_bar").get<double>();
    if (j.contains("beta")) config.beta = j.at("beta").get<double>();
    if (j.contains("initial_k_guess")) config.initial_k_guess = j.at("initial_k_guess").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("experiments")) config.experiments = j.at("experiments").get<int>();
    if (j.contains("budget_grid")) config.budget_grid = j.at("budget_grid").get<std::vector<double>>();
    if (j.contains("gap_tol")) config.gap_tol = j.at("gap_tol").get<double>();
    if (j.contains("max_iter")) config.max_iter = j.at("max_iter").get<int>();
    if (j.contains("train_size")) config.train_size = j.at("train_size").get<int>();
    if (j.contains("test_size")) config.test_size = j.at("test_size").get<long>();
    if (j.contains("s_bar")) config.s_bar = j.at("s_bar").get<long>();
    if (j.contains("cyclic_soc")) config.cyclic_soc = j.at("cyclic_soc").get<bool>();
    if (j.contains("out")) config.out_dir = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("config JSON: ") + ex.what());
  }
  validate_config(config);
  return config;
}

std::string config_to_json_text(const RunConfig& config) {
  nlohmann::json j;
  j["case"] = config.case_path;
  j["scenarios"]["source"] =
      config.source.kind == ScenarioSourceKind::file ? "file" : "generator";
  j["scenarios"]["path"] = config.source.path;
  j["kind"] = kind_to_string(config.kind);
  j["mode"] = certify::to_string(config.mode);
  j["eps_bar"] = config.eps_bar;
  j["beta"] = config.beta;
  j["initial_k_guess"] = config.initial_k_guess;
  j["seed"] = config.seed;
  j["experiments"] = config.experiments;
  if (!config.budget_grid.empty()) j["budget_grid"] = config.budget_grid;
  j["gap_tol"] = config.gap_tol;
  j["max_iter"] = config.max_iter;
  j["train_size"] = config.train_size;
  j["test_size"] = config.test_size;
  if (config.s_bar) j["s_bar"] = *config.s_bar;
  j["cyclic_soc"] = config.cyclic_soc;
  j["out"] = config.out_dir;
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
  RunConfig config = config_from_json_text(read_text_file(path));
  const fs::path dir = fs::path(path).parent_path();
  config.case_path = resolve_against(dir, config.case_path);
  config.source.path = resolve_against(dir, config.source.path);
  return config;
}

scenarios::GeneratorModels load_generator_models(const std::string& path,
                                                 const grid::NetworkCase& net) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("generator descriptor: ") + ex.what());
  }
  scenarios::GeneratorModels models;
  models.farms = static_cast<int>(net.wind_farms.size());
  try {
    if (j.contains("wind")) {
      const auto& w = j.at("wind");
      if (w.contains("weibull_scale")) models.wind.weibull_scale = w.at("weibull_scale").get<double>();
      if (w.contains("weibull_shape")) models.wind.weibull_shape = w.at("weibull_shape").get<double>();
      if (w.contains("v_cut_in")) models.wind.v_cut_in = w.at("v_cut_in").get<double>();
      if (w.contains("v_rated")) models.wind.v_rated = w.at("v_rated").get<double>();
      if (w.contains("v_cut_out")) models.wind.v_cut_out = w.at("v_cut_out").get<double>();
    }
    if (j.contains("load")) {
      const auto& l = j.at("load");
      if (l.contains("sigma_rel")) models.load.sigma_rel = l.at("sigma_rel").get<double>();
      if (l.contains("profiles")) {
        const std::string rel = l.at("profiles").get<std::string>();
        const std::string ppath = resolve_against(fs::path(path).parent_path(), rel);
        const auto pool = scenarios::load_profiles(ppath, net);
        for (const auto& s : pool.scenarios) models.load.base_profiles.push_back(s.load_factor);
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("generator descriptor: ") + ex.what());
  }
  if (!(models.wind.weibull_scale > 0.0) || !(models.wind.weibull_shape > 0.0))
    throw ValidationError("generator descriptor: Weibull parameters must be > 0");
  if (!(models.wind.v_cut_in < models.wind.v_rated && models.wind.v_rated <= models.wind.v_cut_out))
    throw ValidationError("generator descriptor: need v_cut_in < v_rated <= v_cut_out");
  if (models.load.sigma_rel < 0.0)
    throw ValidationError("generator descriptor: sigma_rel must be >= 0");
  if (models.load.base_profiles.empty())
    models.load.base_profiles.push_back(
        scenarios::default_load_shape(static_cast<int>(net.buses.size()), net.horizon));
  return models;
}

scenarios::ScenarioSet make_scenarios(const RunConfig& config, const grid::NetworkCase& net,
                                      int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("make_scenarios: count must be >= 1");
  if (config.source.kind == ScenarioSourceKind::file) {
    const auto pool = scenarios::load_profiles(config.source.path, net);
    return scenarios::sample_iid(pool, count, seed);
  }
  const auto models = load_generator_models(config.source.path, net);
  return scenarios::sample_iid(models, count, seed);
}

GuaranteeRun run_with_guarantee(const RunConfig& config, const grid::NetworkCase& net,
                                std::uint64_t seed) {
  validate_config(config);
  const auto settings = settings_of(config);

  const auto finish = [&](robust::RobustSolution sol, robust::EssentialSet ess,
                          certify::GuaranteeCertificate cert, std::vector<int> history,
                          int passes) {
    GuaranteeRun out;
    out.solution = std::move(sol);
    out.essential = std::move(ess);
    out.certificate = cert;
    out.guess_history = std::move(history);
    out.passes = passes;
    if (config.test_size > 0) {
      const auto test = make_scenarios(config, net, static_cast<int>(config.test_size),
                                       rng::hash64(seed, 0x7e57));
      const auto est = certify::estimate_violation(net, out.solution.plan, out.solution.gamma,
                                                   test, config.kind, {}, settings);
      out.epsilon_hat = est.epsilon_hat;
      out.test_size = est.trials;
    }
    return out;
  };

  const auto plan_on = [&](long K, int pass) {
    if (K > kMaxTrainingSamples)
      throw ConfigError("guarantee loop: sample size " + std::to_string(K) +
                        " exceeds the training cap; raise eps_bar or beta");
    const auto draw = make_scenarios(config, net, static_cast<int>(K),
                                     rng::hash64(seed, 101 + static_cast<std::uint64_t>(pass)));
    auto sol = robust::ccg_solve(net, draw, config.kind, config.gap_tol, config.max_iter, settings);
    const double eq_tol = std::max(1e-6 * std::abs(sol.objective), 1e-3);
    auto ess = robust::find_essential(net, draw, config.kind, sol.critical_set, sol.objective,
                                      eq_tol, settings);
    return std::make_pair(std::move(sol), std::move(ess));
  };

  if (config.mode == certify::GuaranteeMode::prior_convex) {
    const int d = 2 * static_cast<int>(net.storage.candidates.size()) + 1;
    const long K = certify::prior_min_k(config.eps_bar, config.beta, d);
    spdlog::info("guarantee: prior mode, dimension {}, sampling K={}", d, K);
    auto [sol, ess] = plan_on(K, 0);
    auto cert = certify::make_certificate(config.mode, d, config.beta, K);
    const int card = ess.cardinality();
    return finish(std::move(sol), std::move(ess), cert, {card}, 1);
  }

  int k = config.initial_k_guess;
  std::vector<int> history;
  for (int pass = 0; pass < kMaxGuesses; ++pass) {
    if (config.s_bar && k > *config.s_bar)
      throw DomainError("guarantee loop: observed support " + std::to_string(k) +
                        " exceeds the assumed cap s_bar=" + std::to_string(*config.s_bar));
    const long K = certify::min_k_for(config.mode, k, config.eps_bar, config.beta, config.s_bar);
    spdlog::info("guarantee pass {}: guess k={}, sampling K={}", pass + 1, k, K);
    auto [sol, ess] = plan_on(K, pass);
    const int card = ess.cardinality();
    history.push_back(card);
    const double eps = certify::recompute_epsilon(config.mode, card, config.beta, K, config.s_bar);
    if (eps <= config.eps_bar) {
      auto cert = certify::make_certificate(config.mode, card, config.beta, K, config.s_bar);
      spdlog::info("guarantee pass {}: support {} certified at eps={:.6g}", pass + 1, card, eps);
      return finish(std::move(sol), std::move(ess), cert, std::move(history), pass + 1);
    }
    spdlog::info("guarantee pass {}: support {} gives eps={:.6g} > {:.6g}, re-guessing", pass + 1,
                 card, eps, config.eps_bar);
    k = card;
  }
  std::string trail;
  for (std::size_t i = 0; i < history.size(); ++i)
    trail += (i ? "," : "") + std::to_string(history[i]);
  throw GuaranteeExhausted(
      "guarantee loop exhausted after " + std::to_string(kMaxGuesses) +
          " guesses (support cardinality history: " + trail + ")",
      history);
}

GuaranteeRun run_with_guarantee(const RunConfig& config) {
  validate_config(config);
  const auto net = grid::load_case(config.case_path);
  return run_with_guarantee(config, net, config.seed);
}

ExperimentReport run_experiments(const RunConfig& config) {
  validate_config(config);
  const auto net = grid::load_case(config.case_path);
  const int n = config.experiments;

  ExperimentReport report;
  report.config = config;
  report.rows.resize(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));

  const auto worker = [&](int index) {
    auto& row = report.rows[static_cast<std::size_t>(index)];
    row.index = index;
    row.seed = rng::hash64(config.seed, static_cast<std::uint64_t>(index));
    try {
      auto run = run_with_guarantee(config, net, row.seed);
      row.ok = true;
      row.plan = std::move(run.solution.plan);
      row.gamma = run.solution.gamma;
      row.objective = run.solution.objective;
      row.investment = robust::investment_cost(net, row.plan);
      row.essential_size = run.essential.cardinality();
      row.certificate = run.certificate;
      row.epsilon_hat = run.epsilon_hat;
      row.passes = run.passes;
    } catch (const Error& ex) {
      row.ok = false;
      row.error = ex.what();
      errors[static_cast<std::size_t>(index)] = std::current_exception();
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) worker(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) worker(i);
      });
    for (auto& t : pool) t.join();
  }

  const bool any_ok = std::any_of(report.rows.begin(), report.rows.end(),
                                  [](const ExperimentRow& r) { return r.ok; });
  if (!any_ok) {
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    throw SolverError("run_experiments: every experiment failed");
  }

  const auto certified = [&](const ExperimentRow& r) {
    return r.ok && r.certificate.epsilon <= config.eps_bar &&
           certify::certificate_consistent(r.certificate);
  };
  int best = -1;
  if (config.kind.objective == robust::Objective::cost) {
    for (int i = 0; i < n; ++i) {
      const auto& r = report.rows[static_cast<std::size_t>(i)];
      if (!certified(r)) continue;
      if (best < 0 || r.investment < report.rows[static_cast<std::size_t>(best)].investment)
        best = i;
    }
    report.selection_rule = "least investment among certified runs";
  } else {
    for (int i = 0; i < n; ++i) {
      const auto& r = report.rows[static_cast<std::size_t>(i)];
      if (!certified(r) || r.gamma > kZeroShedTol) continue;
      if (best < 0 || r.investment < report.rows[static_cast<std::size_t>(best)].investment)
        best = i;
    }
    report.selection_rule = "least investment among certified runs with zero worst-case curtailment";
    if (best < 0) {
      for (int i = 0; i < n; ++i) {
        const auto& r = report.rows[static_cast<std::size_t>(i)];
        if (!certified(r)) continue;
        if (best < 0 || r.gamma < report.rows[static_cast<std::size_t>(best)].gamma) best = i;
      }
      report.selection_rule = "least worst-case curtailment among certified runs";
    }
  }
  report.selected = best;
  if (best < 0) report.selection_rule = "no certified run";
  return report;
}

SweepReport sweep_budget(const RunConfig& config) {
  validate_config(config);
  if (config.kind.objective != robust::Objective::curtailment)
    throw ConfigError("sweep_budget: requires the curtailment kind");
  if (config.budget_grid.empty()) throw ConfigError("sweep_budget: empty budget grid");
  for (std::size_t i = 1; i < config.budget_grid.size(); ++i)
    if (!(config.budget_grid[i] > config.budget_grid[i - 1]))
      throw ConfigError("sweep_budget: budget grid must be strictly increasing");
  for (double b : config.budget_grid)
    if (b < 0.0) throw ConfigError("sweep_budget: budgets must be >= 0");

  const auto base = grid::load_case(config.case_path);
  const auto settings = settings_of(config);
  const auto train = make_scenarios(config, base, config.train_size, rng::hash64(config.seed, 11));
  scenarios::ScenarioSet test;
  if (config.test_size > 0)
    test = make_scenarios(config, base, static_cast<int>(config.test_size),
                          rng::hash64(config.seed, 12));

  SweepReport report;
  report.config = config;
  report.zero_tol = kZeroShedTol;
  for (double budget : config.budget_grid) {
    grid::NetworkCase net = base;
    net.storage.budget = budget;
    const auto sol =
        robust::ccg_solve(net, train, config.kind, config.gap_tol, config.max_iter, settings);
    SweepPoint point;
    point.budget = budget;
    point.gamma_star = sol.gamma;
    point.investment = robust::investment_cost(net, sol.plan);
    if (config.test_size > 0) {
      const auto est =
          certify::estimate_violation(net, sol.plan, 0.0, test, config.kind, {}, settings);
      point.epsilon_hat = est.epsilon_hat;
    }
    spdlog::info("sweep budget {:.6g}: gamma*={:.6g} MWh, investment {:.6g}", budget,
                 point.gamma_star, point.investment);
    if (report.zero_index < 0 && point.gamma_star <= report.zero_tol)
      report.zero_index = static_cast<int>(report.points.size());
    report.points.push_back(point);
  }
  if (report.zero_index < 0)
    spdlog::warn("sweep_budget: grid exhausted without reaching zero curtailment");
  return report;
}

}  // namespace rsp::cli
