#pragma once

// Static power-system data model, case-file IO, and investment-cost
// annualization. A NetworkCase is immutable after load_case/validate and can
// be shared read-only across threads.

#include <string>
#include <vector>

#include "rsp/common.hpp"

namespace rsp::grid {

struct Bus {
  int id = 0;
  std::string name;
};

struct Line {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double reactance = 0.0;  // per-unit on an implicit 1.0 base
  double flow_min = 0.0;   // MW, <= 0
  double flow_max = 0.0;   // MW, >= 0
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min = 0.0;         // MW
  double p_max = 0.0;         // MW
  double ramp_up = 0.0;       // MW per hour
  double ramp_down = 0.0;     // MW per hour
  double marginal_cost = 0.0; // $/MWh
};

struct WindFarm {
  int id = 0;
  int bus = 0;
  double capacity = 0.0;  // MW
};

struct LoadPoint {
  int bus = 0;
  double peak = 0.0;      // MW
  double shed_cost = 0.0; // $/MWh
};

struct StorageCatalog {
  std::vector<int> candidates;        // bus ids eligible for storage
  double cost_energy_annual = 0.0;    // $/MWh-yr
  double cost_power_annual = 0.0;     // $/kW-yr
  double eta_ch = 1.0;
  double eta_dis = 1.0;
  double rho_min = 0.0;               // 1/h, lower power-to-energy ratio
  double rho_max = 0.0;               // 1/h, upper power-to-energy ratio
  double unit_energy = 0.0;           // MWh per unit
  double unit_power = 0.0;            // MW per unit
  int max_units_per_bus = 0;
  int max_units_total = 0;
  double marginal_charge = 0.0;       // $/MWh
  double marginal_discharge = 0.0;    // $/MWh
  double budget = 0.0;                // $/yr against annualized unit costs
};

struct NetworkCase {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind_farms;
  std::vector<LoadPoint> loads;
  StorageCatalog storage;
  int horizon = 24;      // T, hourly steps
  double day_weight = 365.0;  // K_d, days represented by the typical day
  int slack_bus = 0;

  // Peak load at a bus, 0 when the bus carries no load point.
  double peak_load(int bus) const;
  // Shed cost at a bus, 0 when the bus carries no load point.
  double shed_cost(int bus) const;
};

struct Violation {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string message;
};

// Parses and validates a case file; throws ParseError on malformed JSON and
// ValidationError naming the first error-severity violation.
NetworkCase load_case(const std::string& path);

// Writes the case back out in the same JSON schema (round-trips through
// load_case to a structurally equal case).
void save_case(const NetworkCase& c, const std::string& path);

NetworkCase case_from_json_text(const std::string& text);
std::string case_to_json_text(const NetworkCase& c);

// Returns every violated invariant, warnings included; empty means clean.
std::vector<Violation> validate_case(const NetworkCase& c);

// Annual payment equivalent of a capital cost over `years` at `interest`:
// total * i(1+i)^n / ((1+i)^n - 1). Throws DomainError outside the domain.
double annualize(double total_cost, double interest, int years);

}  // namespace rsp::grid
