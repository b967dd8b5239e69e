#pragma once

// Uncertainty data: ingest daily factor profiles from CSV, synthesize
// scenarios (Weibull wind speeds through a power curve, Gaussian relative
// load noise), sample i.i.d. scenario sets, and split train/test.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsp/grid.hpp"
#include "rsp/rng.hpp"

namespace rsp::scenarios {

// Dense row-major matrix; rows index buses or farms, columns index hours.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  bool operator==(const Matrix&) const = default;
};

// One day of uncertainty: per-bus load factors and per-farm wind capacity
// factors, all in [0,1], columns = case horizon.
struct DailyScenario {
  Matrix load_factor;  // [bus][t]
  Matrix wind_factor;  // [farm][t]
  bool operator==(const DailyScenario&) const = default;
};

struct ScenarioSet {
  std::vector<DailyScenario> scenarios;
  std::string provenance;
  std::optional<std::uint64_t> seed;

  int size() const { return static_cast<int>(scenarios.size()); }
};

struct WindModel {
  double weibull_scale = 11.0086;  // m/s
  double weibull_shape = 1.9622;
  double v_cut_in = 4.0;    // m/s
  double v_rated = 13.61;   // m/s
  double v_cut_out = 25.0;  // m/s
};

struct LoadNoiseModel {
  std::vector<Matrix> base_profiles;  // per-day [bus][t] load factors
  double sigma_rel = 0.01;            // std of the relative Gaussian error
};

struct GeneratorModels {
  WindModel wind;
  LoadNoiseModel load;
  int farms = 0;  // wind-farm count of the target case
};

// Reads the `day,hour,kind,entity,value` CSV; one DailyScenario per distinct
// day ordered by day index. Throws ParseError / ValidationError.
ScenarioSet load_profiles(const std::string& path, const grid::NetworkCase& c);

void save_profiles(const ScenarioSet& set, const std::string& path);

// Standard cubic power curve: 0 below cut-in and at/above cut-out, 1 on
// [v_rated, v_cut_out), (v^3 - v_ci^3)/(v_rated^3 - v_ci^3) between.
double wind_capacity_factor(double speed, const WindModel& model);

// One synthetic wind day: hourly-independent Weibull speeds per farm
// converted through the power curve. Deterministic given the stream.
Matrix generate_wind_day(const WindModel& model, rng::Stream& stream, int farms, int T);

// One synthetic load day: uniformly picked base day plus i.i.d. relative
// Gaussian noise, clamped to [0,1].
Matrix generate_load_day(const LoadNoiseModel& model, rng::Stream& stream);

// K i.i.d. draws with replacement from a finite set (uniform over the
// empirical distribution). `without_replacement` reproduces subsampling
// studies but breaks the i.i.d. premise; it requires K <= |source|.
ScenarioSet sample_iid(const ScenarioSet& source, int K, std::uint64_t seed,
                       bool without_replacement = false);

// K i.i.d. synthetic days from the generator models.
ScenarioSet sample_iid(const GeneratorModels& models, int K, std::uint64_t seed);

// Seeded disjoint partition into (train, test); multiset preserved.
std::pair<ScenarioSet, ScenarioSet> split(const ScenarioSet& set, int train, std::uint64_t seed);

// The flat default daily load shape used when no historical profiles are
// supplied; `bus_count` rows, `T` columns, every row the same curve.
Matrix default_load_shape(int bus_count, int T);

}  // namespace rsp::scenarios
