#include "rsp/grid.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rsp::grid {

using nlohmann::json;

double NetworkCase::peak_load(int bus) const {
  double total = 0.0;
  for (const auto& l : loads)
    if (l.bus == bus) total += l.peak;
  return total;
}

double NetworkCase::shed_cost(int bus) const {
  for (const auto& l : loads)
    if (l.bus == bus) return l.shed_cost;
  return 0.0;
}

double annualize(double total_cost, double interest, int years) {
  if (interest <= 0.0) throw DomainError("annualize: interest must be > 0");
  if (years < 1) throw DomainError("annualize: years must be >= 1");
  const double growth = std::pow(1.0 + interest, years);
  return total_cost * interest * growth / (growth - 1.0);
}

namespace {

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("case: missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

int integer(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ParseError(std::string("case: missing or non-integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

NetworkCase case_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("case: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("case: top level must be an object");

  NetworkCase c;
  for (const auto& b : j.value("buses", json::array())) {
    Bus bus;
    bus.id = integer(b, "id");
    bus.name = b.value("name", std::string());
    c.buses.push_back(bus);
  }
  for (const auto& l : j.value("lines", json::array())) {
    Line line;
    line.id = integer(l, "id");
    line.from_bus = integer(l, "from_bus");
    line.to_bus = integer(l, "to_bus");
    line.reactance = num(l, "reactance");
    line.flow_min = num(l, "flow_min");
    line.flow_max = num(l, "flow_max");
    c.lines.push_back(line);
  }
  for (const auto& g : j.value("generators", json::array())) {
    Generator gen;
    gen.id = integer(g, "id");
    gen.bus = integer(g, "bus");
    gen.p_min = num(g, "p_min");
    gen.p_max = num(g, "p_max");
    gen.ramp_up = num(g, "ramp_up");
    gen.ramp_down = num(g, "ramp_down");
    gen.marginal_cost = num(g, "marginal_cost");
    c.generators.push_back(gen);
  }
  for (const auto& w : j.value("wind_farms", json::array())) {
    WindFarm farm;
    farm.id = integer(w, "id");
    farm.bus = integer(w, "bus");
    farm.capacity = num(w, "capacity");
    c.wind_farms.push_back(farm);
  }
  for (const auto& l : j.value("loads", json::array())) {
    LoadPoint lp;
    lp.bus = integer(l, "bus");
    lp.peak = num(l, "peak");
    lp.shed_cost = num(l, "shed_cost");
    c.loads.push_back(lp);
  }
  if (j.contains("storage")) {
    const auto& s = j["storage"];
    auto& cat = c.storage;
    if (s.contains("candidates")) {
      for (const auto& b : s["candidates"]) cat.candidates.push_back(b.get<int>());
    }
    cat.cost_energy_annual = num(s, "cost_energy_annual");
    cat.cost_power_annual = num(s, "cost_power_annual");
    cat.eta_ch = num(s, "eta_ch");
    cat.eta_dis = num(s, "eta_dis");
    cat.rho_min = num(s, "rho_min");
    cat.rho_max = num(s, "rho_max");
    cat.unit_energy = num(s, "unit_energy");
    cat.unit_power = num(s, "unit_power");
    cat.max_units_per_bus = integer(s, "max_units_per_bus");
    cat.max_units_total = integer(s, "max_units_total");
    cat.marginal_charge = num(s, "marginal_charge");
    cat.marginal_discharge = num(s, "marginal_discharge");
    cat.budget = num(s, "budget");
  }
  c.horizon = j.value("horizon", 24);
  c.day_weight = j.value("day_weight", 365.0);
  c.slack_bus = j.value("slack_bus", 0);
  return c;
}

std::string case_to_json_text(const NetworkCase& c) {
  json j;
  j["buses"] = json::array();
  for (const auto& b : c.buses) j["buses"].push_back({{"id", b.id}, {"name", b.name}});
  j["lines"] = json::array();
  for (const auto& l : c.lines)
    j["lines"].push_back({{"id", l.id},
                          {"from_bus", l.from_bus},
                          {"to_bus", l.to_bus},
                          {"reactance", l.reactance},
                          {"flow_min", l.flow_min},
                          {"flow_max", l.flow_max}});
  j["generators"] = json::array();
  for (const auto& g : c.generators)
    j["generators"].push_back({{"id", g.id},
                               {"bus", g.bus},
                               {"p_min", g.p_min},
                               {"p_max", g.p_max},
                               {"ramp_up", g.ramp_up},
                               {"ramp_down", g.ramp_down},
                               {"marginal_cost", g.marginal_cost}});
  j["wind_farms"] = json::array();
  for (const auto& w : c.wind_farms)
    j["wind_farms"].push_back({{"id", w.id}, {"bus", w.bus}, {"capacity", w.capacity}});
  j["loads"] = json::array();
  for (const auto& l : c.loads)
    j["loads"].push_back({{"bus", l.bus}, {"peak", l.peak}, {"shed_cost", l.shed_cost}});
  const auto& s = c.storage;
  j["storage"] = {{"candidates", s.candidates},
                  {"cost_energy_annual", s.cost_energy_annual},
                  {"cost_power_annual", s.cost_power_annual},
                  {"eta_ch", s.eta_ch},
                  {"eta_dis", s.eta_dis},
                  {"rho_min", s.rho_min},
                  {"rho_max", s.rho_max},
                  {"unit_energy", s.unit_energy},
                  {"unit_power", s.unit_power},
                  {"max_units_per_bus", s.max_units_per_bus},
                  {"max_units_total", s.max_units_total},
                  {"marginal_charge", s.marginal_charge},
                  {"marginal_discharge", s.marginal_discharge},
                  {"budget", s.budget}};
  j["horizon"] = c.horizon;
  j["day_weight"] = c.day_weight;
  j["slack_bus"] = c.slack_bus;
  return j.dump(2);
}

NetworkCase load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open case file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  NetworkCase c = case_from_json_text(buf.str());
  for (const auto& v : validate_case(c))
    if (v.severity == Violation::Severity::error) throw ValidationError(path + ": " + v.message);
  return c;
}

void save_case(const NetworkCase& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write case file: " + path);
  out << case_to_json_text(c) << "\n";
}

std::vector<Violation> validate_case(const NetworkCase& c) {
  std::vector<Violation> out;
  auto error = [&out](std::string msg) {
    out.push_back({Violation::Severity::error, std::move(msg)});
  };
  auto warning = [&out](std::string msg) {
    out.push_back({Violation::Severity::warning, std::move(msg)});
  };

  const int n = static_cast<int>(c.buses.size());
  if (n == 0) error("case has no buses");
  std::set<int> ids;
  for (const auto& b : c.buses) ids.insert(b.id);
  if (static_cast<int>(ids.size()) != n || (n > 0 && (*ids.begin() != 0 || *ids.rbegin() != n - 1)))
    error("bus ids must be dense 0..N-1 and unique");
  auto known = [&ids](int bus) { return ids.count(bus) > 0; };

  for (const auto& l : c.lines) {
    if (!known(l.from_bus) || !known(l.to_bus))
      error("line " + std::to_string(l.id) + ": unknown bus");
    if (l.from_bus == l.to_bus) error("line " + std::to_string(l.id) + ": self-loop");
    if (!(l.reactance > 0.0)) error("line " + std::to_string(l.id) + ": reactance must be > 0");
    if (!(l.flow_min <= 0.0 && 0.0 <= l.flow_max))
      error("line " + std::to_string(l.id) + ": flow bounds must satisfy flow_min <= 0 <= flow_max");
  }
  double max_marginal = 0.0;
  for (const auto& g : c.generators) {
    if (!known(g.bus)) error("generator " + std::to_string(g.id) + ": unknown bus");
    if (!(0.0 <= g.p_min && g.p_min <= g.p_max))
      error("generator " + std::to_string(g.id) + ": need 0 <= p_min <= p_max");
    if (g.ramp_up < 0.0 || g.ramp_down < 0.0)
      error("generator " + std::to_string(g.id) + ": ramps must be >= 0");
    if (g.marginal_cost < 0.0)
      error("generator " + std::to_string(g.id) + ": marginal_cost must be >= 0");
    max_marginal = std::max(max_marginal, g.marginal_cost);
  }
  for (const auto& w : c.wind_farms) {
    if (!known(w.bus)) error("wind farm " + std::to_string(w.id) + ": unknown bus");
    if (w.capacity < 0.0) error("wind farm " + std::to_string(w.id) + ": capacity must be >= 0");
  }
  for (const auto& l : c.loads) {
    if (!known(l.bus)) error("load at bus " + std::to_string(l.bus) + ": unknown bus");
    if (l.peak < 0.0) error("load at bus " + std::to_string(l.bus) + ": peak must be >= 0");
    if (l.shed_cost <= max_marginal)
      warning("load at bus " + std::to_string(l.bus) +
              ": shed_cost does not exceed max generator marginal cost");
  }

  const auto& s = c.storage;
  if (!s.candidates.empty()) {
    for (int b : s.candidates)
      if (!known(b)) error("storage candidate: unknown bus " + std::to_string(b));
    if (!(0.0 < s.rho_min && s.rho_min <= s.rho_max))
      error("storage: need 0 < rho_min <= rho_max");
    if (!(s.eta_ch > 0.0 && s.eta_ch <= 1.0)) error("storage: eta_ch out of (0,1]");
    if (!(s.eta_dis > 0.0 && s.eta_dis <= 1.0)) error("storage: eta_dis out of (0,1]");
    if (!(s.unit_energy > 0.0 && s.unit_power > 0.0))
      error("storage: unit_energy and unit_power must be > 0");
    if (s.budget < 0.0) error("storage: budget must be >= 0");
    if (s.max_units_per_bus < 0 || s.max_units_total < 0)
      error("storage: unit limits must be >= 0");
  }

  if (c.horizon < 1) error("horizon must be >= 1");
  if (!known(c.slack_bus)) error("slack_bus is not a known bus");
  return out;
}

}  // namespace rsp::grid
