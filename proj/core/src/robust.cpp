#include "rsp/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

namespace rsp::robust {

using grid::NetworkCase;
using scenarios::DailyScenario;
using solver::LinearModel;
using solver::LinExpr;
using solver::Sense;
using solver::SolveResult;
using solver::SolveStatus;
using solver::VarKind;
using solver::VarRef;

const char* to_string(Objective o) { return o == Objective::cost ? "cost" : "curtailment"; }
const char* to_string(Convexity c) { return c == Convexity::convex ? "convex" : "nonconvex"; }

std::string plan_to_json_text(const StoragePlan& plan) {
  nlohmann::json j;
  j["energy"] = plan.energy;
  j["power"] = plan.power;
  if (!plan.units.empty()) j["units"] = plan.units;
  return j.dump(2) + "\n";
}

StoragePlan plan_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan JSON: ") + e.what());
  }
  StoragePlan plan;
  try {
    plan.energy = j.at("energy").get<std::vector<double>>();
    plan.power = j.at("power").get<std::vector<double>>();
    if (j.contains("units")) plan.units = j.at("units").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan JSON: ") + e.what());
  }
  if (plan.power.size() != plan.energy.size() ||
      (!plan.units.empty() && plan.units.size() != plan.energy.size()))
    throw ValidationError("plan JSON: energy/power/units lengths differ");
  return plan;
}

double investment_cost(const NetworkCase& net, const StoragePlan& plan) {
  const auto& st = net.storage;
  double total = 0.0;
  for (std::size_t i = 0; i < plan.energy.size(); ++i) {
    total += st.cost_energy_annual * plan.energy[i] + 1000.0 * st.cost_power_annual * plan.power[i];
  }
  return total;
}

namespace {

// First-stage capacities seen by an operation block: either fixed numbers
// (second-stage solves) or master variables (convex E/P or quantized units).
struct FirstStageView {
  const StoragePlan* plan = nullptr;
  const std::vector<VarRef>* energy = nullptr;
  const std::vector<VarRef>* power = nullptr;
  const std::vector<VarRef>* units = nullptr;

  bool fixed() const { return plan != nullptr; }
};

struct Block {
  std::vector<std::vector<VarRef>> gen, ch, dis, soc, flow, theta, shed, status;
  LinExpr day_cost;
  LinExpr day_shed;
};

void check_dimensions(const NetworkCase& net, const DailyScenario& sc) {
  const int B = static_cast<int>(net.buses.size());
  const int F = static_cast<int>(net.wind_farms.size());
  if (sc.load_factor.rows != B || sc.load_factor.cols != net.horizon)
    throw DomainError("scenario load factors are " + std::to_string(sc.load_factor.rows) + "x" +
                      std::to_string(sc.load_factor.cols) + ", case needs " + std::to_string(B) +
                      "x" + std::to_string(net.horizon));
  if (sc.wind_factor.rows != F || (F > 0 && sc.wind_factor.cols != net.horizon))
    throw DomainError("scenario wind factors do not match the case's farms/horizon");
}

std::vector<std::vector<VarRef>> grid_vars(LinearModel& m, const std::string& tag,
                                           const char* stem, int count, int T, double lo, double hi,
                                           VarKind kind = VarKind::continuous) {
  std::vector<std::vector<VarRef>> out(count);
  for (int i = 0; i < count; ++i) {
    out[i].reserve(T);
    for (int t = 0; t < T; ++t)
      out[i].push_back(m.add_var(tag + stem + std::to_string(i) + "_t" + std::to_string(t), lo, hi, kind));
  }
  return out;
}

Block add_operation_block(LinearModel& m, const NetworkCase& net, const DailyScenario& sc,
                          FormulationKind kind, const FirstStageView& fs, const std::string& tag,
                          bool cyclic_soc) {
  check_dimensions(net, sc);
  const int T = net.horizon;
  const int B = static_cast<int>(net.buses.size());
  const int G = static_cast<int>(net.generators.size());
  const int L = static_cast<int>(net.lines.size());
  const auto& st = net.storage;
  const int S = static_cast<int>(st.candidates.size());
  const bool quantized = kind.convexity == Convexity::nonconvex;

  Block blk;
  blk.gen.resize(G);
  for (int g = 0; g < G; ++g) {
    const auto& gen = net.generators[g];
    blk.gen[g].reserve(T);
    for (int t = 0; t < T; ++t)
      blk.gen[g].push_back(m.add_var(tag + "g" + std::to_string(g) + "_t" + std::to_string(t),
                                     gen.p_min, gen.p_max));
  }

  double ch_hi = solver::kInf, soc_hi = solver::kInf;
  blk.ch.resize(S);
  blk.dis.resize(S);
  blk.soc.resize(S);
  for (int s = 0; s < S; ++s) {
    if (fs.fixed()) {
      ch_hi = fs.plan->power[s];
      soc_hi = fs.plan->energy[s];
    }
    for (int t = 0; t < T; ++t) {
      const std::string suffix = std::to_string(s) + "_t" + std::to_string(t);
      blk.ch[s].push_back(m.add_var(tag + "ch" + suffix, 0.0, ch_hi));
      blk.dis[s].push_back(m.add_var(tag + "dis" + suffix, 0.0, ch_hi));
      blk.soc[s].push_back(m.add_var(tag + "soc" + suffix, 0.0, soc_hi));
    }
  }
  blk.flow.resize(L);
  for (int l = 0; l < L; ++l) {
    const auto& line = net.lines[l];
    for (int t = 0; t < T; ++t)
      blk.flow[l].push_back(m.add_var(tag + "f" + std::to_string(l) + "_t" + std::to_string(t),
                                      line.flow_min, line.flow_max));
  }
  blk.theta.resize(B);
  for (int b = 0; b < B; ++b) {
    const bool slack = b == net.slack_bus;
    for (int t = 0; t < T; ++t)
      blk.theta[b].push_back(m.add_var(tag + "th" + std::to_string(b) + "_t" + std::to_string(t),
                                       slack ? 0.0 : -solver::kInf, slack ? 0.0 : solver::kInf));
  }
  blk.shed.resize(B);
  for (int b = 0; b < B; ++b) {
    const double peak = net.peak_load(b);
    for (int t = 0; t < T; ++t)
      blk.shed[b].push_back(m.add_var(tag + "sh" + std::to_string(b) + "_t" + std::to_string(t),
                                      0.0, sc.load_factor.at(b, t) * peak));
  }
  if (quantized)
    blk.status = grid_vars(m, tag, "v", S, T, 0.0, 1.0, VarKind::binary);

  // Nodal balance: generation + discharge - charge + inflow - outflow + shed
  // = load - wind, hour by hour.
  std::vector<std::vector<int>> gens_at(B), cands_at(B), farms_at(B), in_at(B), out_at(B);
  for (int g = 0; g < G; ++g) gens_at[net.generators[g].bus].push_back(g);
  for (int s = 0; s < S; ++s) cands_at[st.candidates[s]].push_back(s);
  for (int f = 0; f < static_cast<int>(net.wind_farms.size()); ++f)
    farms_at[net.wind_farms[f].bus].push_back(f);
  for (int l = 0; l < L; ++l) {
    in_at[net.lines[l].to_bus].push_back(l);
    out_at[net.lines[l].from_bus].push_back(l);
  }

  for (int t = 0; t < T; ++t) {
    for (int b = 0; b < B; ++b) {
      LinExpr e;
      for (int g : gens_at[b]) e.add(blk.gen[g][t], 1.0);
      for (int s : cands_at[b]) {
        e.add(blk.dis[s][t], 1.0);
        e.add(blk.ch[s][t], -1.0);
      }
      for (int l : in_at[b]) e.add(blk.flow[l][t], 1.0);
      for (int l : out_at[b]) e.add(blk.flow[l][t], -1.0);
      e.add(blk.shed[b][t], 1.0);
      double rhs = sc.load_factor.at(b, t) * net.peak_load(b);
      for (int f : farms_at[b]) rhs -= sc.wind_factor.at(f, t) * net.wind_farms[f].capacity;
      m.add_row(tag + "bal" + std::to_string(b) + "_t" + std::to_string(t), e, Sense::eq, rhs);
    }
    for (int l = 0; l < L; ++l) {
      const auto& line = net.lines[l];
      LinExpr e;
      e.add(blk.flow[l][t], 1.0);
      e.add(blk.theta[line.from_bus][t], -1.0 / line.reactance);
      e.add(blk.theta[line.to_bus][t], 1.0 / line.reactance);
      m.add_row(tag + "dc" + std::to_string(l) + "_t" + std::to_string(t), e, Sense::eq, 0.0);
    }
    if (t >= 1) {
      for (int g = 0; g < G; ++g) {
        const auto& gen = net.generators[g];
        LinExpr up, down;
        up.add(blk.gen[g][t], 1.0).add(blk.gen[g][t - 1], -1.0);
        m.add_row(tag + "ru" + std::to_string(g) + "_t" + std::to_string(t), up, Sense::le, gen.ramp_up);
        down.add(blk.gen[g][t - 1], 1.0).add(blk.gen[g][t], -1.0);
        m.add_row(tag + "rd" + std::to_string(g) + "_t" + std::to_string(t), down, Sense::le,
                  gen.ramp_down);
      }
    }
  }

  // Storage dynamics and capacity coupling.
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      LinExpr e;
      e.add(blk.soc[s][t], 1.0);
      if (t >= 1) e.add(blk.soc[s][t - 1], -1.0);
      e.add(blk.ch[s][t], -st.eta_ch);
      e.add(blk.dis[s][t], 1.0 / st.eta_dis);
      m.add_row(tag + "soc" + std::to_string(s) + "_t" + std::to_string(t), e, Sense::eq, 0.0);

      const std::string suffix = std::to_string(s) + "_t" + std::to_string(t);
      if (fs.fixed()) {
        if (quantized) {
          const double p = fs.plan->power[s];
          LinExpr c, d, x;
          c.add(blk.ch[s][t], 1.0).add(blk.status[s][t], -p);
          m.add_row(tag + "chv" + suffix, c, Sense::le, 0.0);
          d.add(blk.dis[s][t], 1.0).add(blk.status[s][t], p);
          m.add_row(tag + "disv" + suffix, d, Sense::le, p);
          // Implied by the two rows above for v in {0,1}; tightens the
          // relaxation so the root LP already carries the hull value.
          x.add(blk.ch[s][t], 1.0).add(blk.dis[s][t], 1.0);
          m.add_row(tag + "xc" + suffix, x, Sense::le, p);
        } else {
          LinExpr x;
          x.add(blk.ch[s][t], 1.0).add(blk.dis[s][t], 1.0);
          m.add_row(tag + "xc" + suffix, x, Sense::le, fs.plan->power[s]);
        }
      } else if (quantized) {
        const VarRef z = (*fs.units)[s];
        const double cap = st.max_units_per_bus * st.unit_power;
        LinExpr c, cp, d, dp, ecap;
        c.add(blk.ch[s][t], 1.0).add(blk.status[s][t], -cap);
        m.add_row(tag + "chv" + suffix, c, Sense::le, 0.0);
        cp.add(blk.ch[s][t], 1.0).add(z, -st.unit_power);
        m.add_row(tag + "chp" + suffix, cp, Sense::le, 0.0);
        d.add(blk.dis[s][t], 1.0).add(blk.status[s][t], cap);
        m.add_row(tag + "disv" + suffix, d, Sense::le, cap);
        dp.add(blk.dis[s][t], 1.0).add(z, -st.unit_power);
        m.add_row(tag + "disp" + suffix, dp, Sense::le, 0.0);
        LinExpr x;
        x.add(blk.ch[s][t], 1.0).add(blk.dis[s][t], 1.0).add(z, -st.unit_power);
        m.add_row(tag + "xc" + suffix, x, Sense::le, 0.0);
        ecap.add(blk.soc[s][t], 1.0).add(z, -st.unit_energy);
        m.add_row(tag + "ecap" + suffix, ecap, Sense::le, 0.0);
      } else {
        LinExpr x, ecap;
        x.add(blk.ch[s][t], 1.0).add(blk.dis[s][t], 1.0).add((*fs.power)[s], -1.0);
        m.add_row(tag + "xc" + suffix, x, Sense::le, 0.0);
        ecap.add(blk.soc[s][t], 1.0).add((*fs.energy)[s], -1.0);
        m.add_row(tag + "ecap" + suffix, ecap, Sense::le, 0.0);
      }
    }
    if (cyclic_soc) {
      LinExpr e;
      e.add(blk.soc[s][T - 1], 1.0);
      m.add_row(tag + "cyc" + std::to_string(s), e, Sense::eq, 0.0);
    }
  }

  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g)
      blk.day_cost.add(blk.gen[g][t], net.generators[g].marginal_cost);
    for (int s = 0; s < S; ++s) {
      blk.day_cost.add(blk.ch[s][t], st.marginal_charge);
      blk.day_cost.add(blk.dis[s][t], st.marginal_discharge);
    }
    for (int b = 0; b < B; ++b) {
      blk.day_cost.add(blk.shed[b][t], net.shed_cost(b));
      blk.day_shed.add(blk.shed[b][t], 1.0);
    }
  }
  return blk;
}

void set_objective_from(LinearModel& m, const LinExpr& expr) {
  for (const auto& t : expr.terms) m.set_obj_coef(VarRef{t.var}, t.coef);
  m.set_obj_constant(expr.constant);
}

scenarios::Matrix read_matrix(const SolveResult& res, const std::vector<std::vector<VarRef>>& h,
                              int T) {
  scenarios::Matrix out(static_cast<int>(h.size()), T);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (int t = 0; t < T; ++t) out.at(static_cast<int>(i), t) = res.value_of(h[i][t]);
  return out;
}

void check_plan(const NetworkCase& net, const StoragePlan& plan) {
  const std::size_t S = net.storage.candidates.size();
  if (plan.energy.size() != S || plan.power.size() != S)
    throw DomainError("plan has " + std::to_string(plan.energy.size()) + " candidates, case has " +
                      std::to_string(S));
  if (!plan.units.empty() && plan.units.size() != S)
    throw DomainError("plan unit counts do not match the candidate list");
}

}  // namespace

SecondStage build_second_stage(const NetworkCase& net, const StoragePlan& plan,
                               const DailyScenario& scenario, FormulationKind kind,
                               const SolveSettings& settings) {
  check_plan(net, plan);
  SecondStage out;
  FirstStageView fs;
  fs.plan = &plan;
  Block blk = add_operation_block(out.model, net, scenario, kind, fs, "", settings.cyclic_soc);
  set_objective_from(out.model, kind.objective == Objective::cost ? blk.day_cost : blk.day_shed);
  out.gen = std::move(blk.gen);
  out.charge = std::move(blk.ch);
  out.discharge = std::move(blk.dis);
  out.soc = std::move(blk.soc);
  out.flow = std::move(blk.flow);
  out.angle = std::move(blk.theta);
  out.shed = std::move(blk.shed);
  out.status = std::move(blk.status);
  return out;
}

OperationOutcome evaluate_operation(const NetworkCase& net, const StoragePlan& plan,
                                    const DailyScenario& scenario, FormulationKind kind,
                                    const SolveSettings& settings) {
  SecondStage ss = build_second_stage(net, plan, scenario, kind, settings);
  const SolveResult res = kind.convexity == Convexity::nonconvex
                              ? solver::solve_mip(ss.model, settings.solver)
                              : solver::solve_lp(ss.model, settings.solver);
  if (res.status != SolveStatus::optimal)
    throw SolverError(std::string("second-stage dispatch came back ") + to_string(res.status) +
                      "; with shedding enabled this indicates a formulation bug");

  const int T = net.horizon;
  OperationOutcome out;
  out.gen = read_matrix(res, ss.gen, T);
  out.charge = read_matrix(res, ss.charge, T);
  out.discharge = read_matrix(res, ss.discharge, T);
  out.soc = read_matrix(res, ss.soc, T);
  out.flow = read_matrix(res, ss.flow, T);
  out.angle = read_matrix(res, ss.angle, T);
  out.shed = read_matrix(res, ss.shed, T);

  double cost = 0.0, shed = 0.0;
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < static_cast<int>(net.generators.size()); ++g)
      cost += net.generators[g].marginal_cost * out.gen.at(g, t);
    for (int s = 0; s < out.charge.rows; ++s)
      cost += net.storage.marginal_charge * out.charge.at(s, t) +
              net.storage.marginal_discharge * out.discharge.at(s, t);
    for (int b = 0; b < out.shed.rows; ++b) {
      cost += net.shed_cost(b) * out.shed.at(b, t);
      shed += out.shed.at(b, t);
    }
  }
  if (kind.objective == Objective::cost) {
    out.total_cost = res.objective;
    out.total_shed = shed;
  } else {
    out.total_cost = cost;
    out.total_shed = res.objective;
  }
  return out;
}

std::pair<int, double> worst_case_response(const NetworkCase& net, const StoragePlan& plan,
                                           const scenarios::ScenarioSet& set, FormulationKind kind,
                                           const SolveSettings& settings) {
  if (set.scenarios.empty()) throw DomainError("worst_case_response needs at least one scenario");
  int worst = -1;
  double worst_value = 0.0;
  for (int i = 0; i < set.size(); ++i) {
    const OperationOutcome oc = evaluate_operation(net, plan, set.scenarios[i], kind, settings);
    const double v = kind.objective == Objective::cost ? oc.total_cost : oc.total_shed;
    if (worst < 0 || v > worst_value) {
      worst = i;
      worst_value = v;
    }
  }
  return {worst, worst_value};
}

Master build_master(const NetworkCase& net, const std::vector<DailyScenario>& active,
                    FormulationKind kind, const SolveSettings& settings) {
  if (active.empty()) throw DomainError("master needs at least one active scenario");
  const auto& st = net.storage;
  const int S = static_cast<int>(st.candidates.size());

  Master master;
  LinearModel& m = master.model;
  FirstStageView fs;
  LinExpr budget;
  if (kind.convexity == Convexity::convex) {
    for (int s = 0; s < S; ++s) {
      const std::string bus = std::to_string(st.candidates[s]);
      master.energy.push_back(m.add_var("E" + bus, 0.0, solver::kInf));
      master.power.push_back(m.add_var("P" + bus, 0.0, solver::kInf));
      LinExpr lo, hi;
      lo.add(master.power[s], -1.0).add(master.energy[s], st.rho_min);
      m.add_row("rho_lo" + bus, lo, Sense::le, 0.0);
      hi.add(master.power[s], 1.0).add(master.energy[s], -st.rho_max);
      m.add_row("rho_hi" + bus, hi, Sense::le, 0.0);
      budget.add(master.energy[s], st.cost_energy_annual);
      budget.add(master.power[s], 1000.0 * st.cost_power_annual);
    }
    fs.energy = &master.energy;
    fs.power = &master.power;
  } else {
    LinExpr total;
    for (int s = 0; s < S; ++s) {
      const std::string bus = std::to_string(st.candidates[s]);
      master.units.push_back(
          m.add_var("z" + bus, 0.0, st.max_units_per_bus, VarKind::integer));
      total.add(master.units[s], 1.0);
      budget.add(master.units[s],
                 st.cost_energy_annual * st.unit_energy + 1000.0 * st.cost_power_annual * st.unit_power);
    }
    if (S > 0) m.add_row("units_total", total, Sense::le, st.max_units_total);
    fs.units = &master.units;
  }
  if (S > 0) m.add_row("budget", budget, Sense::le, st.budget);

  master.gamma = m.add_var("gamma", 0.0, solver::kInf);

  for (std::size_t l = 0; l < active.size(); ++l) {
    const std::string tag = "s" + std::to_string(l) + ":";
    Block blk = add_operation_block(m, net, active[l], kind, fs, tag, settings.cyclic_soc);
    LinExpr epi = kind.objective == Objective::cost ? blk.day_cost : blk.day_shed;
    epi.add(master.gamma, -1.0);
    m.add_row(tag + "value", epi, Sense::le, 0.0);
  }

  if (kind.objective == Objective::cost) {
    if (kind.convexity == Convexity::convex) {
      for (int s = 0; s < S; ++s) {
        m.set_obj_coef(master.energy[s], st.cost_energy_annual);
        m.set_obj_coef(master.power[s], 1000.0 * st.cost_power_annual);
      }
    } else {
      for (int s = 0; s < S; ++s)
        m.set_obj_coef(master.units[s], st.cost_energy_annual * st.unit_energy +
                                            1000.0 * st.cost_power_annual * st.unit_power);
    }
    m.set_obj_coef(master.gamma, net.day_weight);
  } else {
    m.set_obj_coef(master.gamma, 1.0);
  }
  return master;
}

StoragePlan extract_plan(const NetworkCase& net, const Master& master, const SolveResult& result,
                         FormulationKind kind) {
  StoragePlan plan;
  if (kind.convexity == Convexity::convex) {
    for (const VarRef& v : master.energy) plan.energy.push_back(std::max(0.0, result.value_of(v)));
    for (const VarRef& v : master.power) plan.power.push_back(std::max(0.0, result.value_of(v)));
  } else {
    for (const VarRef& v : master.units) {
      const int z = static_cast<int>(std::lround(result.value_of(v)));
      plan.units.push_back(z);
      plan.energy.push_back(z * net.storage.unit_energy);
      plan.power.push_back(z * net.storage.unit_power);
    }
  }
  return plan;
}

RobustSolution extensive_solve(const NetworkCase& net, const scenarios::ScenarioSet& set,
                               FormulationKind kind, long var_cap, const SolveSettings& settings) {
  if (set.scenarios.empty()) throw DomainError("extensive_solve needs at least one scenario");
  const long T = net.horizon;
  const long B = static_cast<long>(net.buses.size());
  const long S = static_cast<long>(net.storage.candidates.size());
  const long per_scn = T * (static_cast<long>(net.generators.size()) + 3 * S +
                            static_cast<long>(net.lines.size()) + 2 * B +
                            (kind.convexity == Convexity::nonconvex ? S : 0));
  const long first = (kind.convexity == Convexity::convex ? 2 * S : S) + 1;
  if (first + set.size() * per_scn > var_cap)
    throw DomainError("extensive form needs " + std::to_string(first + set.size() * per_scn) +
                      " variables, cap is " + std::to_string(var_cap));

  Master master = build_master(net, set.scenarios, kind, settings);
  const SolveResult res = master.model.has_integers() ? solver::solve_mip(master.model, settings.solver)
                                                      : solver::solve_lp(master.model, settings.solver);
  if (res.status != SolveStatus::optimal)
    throw SolverError(std::string("extensive solve came back ") + to_string(res.status));

  RobustSolution sol;
  sol.plan = extract_plan(net, master, res, kind);
  sol.gamma = res.value_of(master.gamma);
  sol.objective = res.objective;
  sol.lb = res.objective;
  sol.ub = res.objective;
  sol.critical_set.resize(set.size());
  std::iota(sol.critical_set.begin(), sol.critical_set.end(), 0);
  sol.iterations = 1;
  sol.converged = true;
  return sol;
}

}  // namespace rsp::robust
