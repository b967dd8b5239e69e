#include "rsp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rsp::scenarios {

double wind_capacity_factor(double speed, const WindModel& m) {
  if (speed < m.v_cut_in || speed >= m.v_cut_out) return 0.0;
  if (speed >= m.v_rated) return 1.0;
  const double lo = m.v_cut_in * m.v_cut_in * m.v_cut_in;
  const double hi = m.v_rated * m.v_rated * m.v_rated;
  return (speed * speed * speed - lo) / (hi - lo);
}

Matrix generate_wind_day(const WindModel& model, rng::Stream& stream, int farms, int T) {
  Matrix out(farms, T);
  for (int f = 0; f < farms; ++f)
    for (int t = 0; t < T; ++t)
      out.at(f, t) = wind_capacity_factor(
          stream.next_weibull(model.weibull_scale, model.weibull_shape), model);
  return out;
}

Matrix generate_load_day(const LoadNoiseModel& model, rng::Stream& stream) {
  if (model.base_profiles.empty())
    throw DomainError("generate_load_day: no base profiles");
  const auto& base =
      model.base_profiles[stream.next_below(model.base_profiles.size())];
  Matrix out = base;
  for (double& v : out.data) {
    v += stream.next_gaussian() * model.sigma_rel * v;
    v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

namespace {

std::string synthetic_provenance(std::uint64_t seed, int K) {
  std::ostringstream os;
  os << "synthetic:" << rng::kAlgorithm << ":seed=" << seed << ":K=" << K;
  return os.str();
}

}  // namespace

ScenarioSet sample_iid(const ScenarioSet& source, int K, std::uint64_t seed,
                       bool without_replacement) {
  if (K < 1) throw DomainError("sample_iid: K must be >= 1");
  if (source.scenarios.empty()) throw DomainError("sample_iid: empty source set");
  ScenarioSet out;
  out.seed = seed;
  rng::Stream stream = rng::Stream::derive(seed, 0);
  const int n = source.size();
  if (without_replacement) {
    if (K > n) throw DomainError("sample_iid: K exceeds source size without replacement");
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < K; ++i) {
      const int j = i + static_cast<int>(stream.next_below(n - i));
      std::swap(idx[i], idx[j]);
      out.scenarios.push_back(source.scenarios[idx[i]]);
    }
    out.provenance = "subsample:seed=" + std::to_string(seed) + ":K=" + std::to_string(K) +
                     ":src=" + source.provenance;
  } else {
    for (int i = 0; i < K; ++i)
      out.scenarios.push_back(source.scenarios[stream.next_below(n)]);
    out.provenance = "resample:seed=" + std::to_string(seed) + ":K=" + std::to_string(K) +
                     ":src=" + source.provenance;
  }
  return out;
}

ScenarioSet sample_iid(const GeneratorModels& models, int K, std::uint64_t seed) {
  if (K < 1) throw DomainError("sample_iid: K must be >= 1");
  if (models.load.base_profiles.empty())
    throw DomainError("sample_iid: generator models lack base load profiles");
  const int T = models.load.base_profiles.front().cols;
  ScenarioSet out;
  out.seed = seed;
  out.provenance = synthetic_provenance(seed, K);
  out.scenarios.reserve(K);
  for (int i = 0; i < K; ++i) {
    const std::uint64_t day_seed = rng::hash64(seed, static_cast<std::uint64_t>(i));
    rng::Stream wind_stream = rng::Stream::derive(day_seed, 0);
    rng::Stream load_stream = rng::Stream::derive(day_seed, 1);
    DailyScenario s;
    s.wind_factor = generate_wind_day(models.wind, wind_stream, models.farms, T);
    s.load_factor = generate_load_day(models.load, load_stream);
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

std::pair<ScenarioSet, ScenarioSet> split(const ScenarioSet& set, int train, std::uint64_t seed) {
  const int n = set.size();
  if (train > n) throw DomainError("split: train count exceeds set size");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  rng::Stream stream = rng::Stream::derive(seed, 1);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(idx[i], idx[j]);
  }
  ScenarioSet a, b;
  a.seed = b.seed = seed;
  a.provenance = "split:train:seed=" + std::to_string(seed) + ":src=" + set.provenance;
  b.provenance = "split:test:seed=" + std::to_string(seed) + ":src=" + set.provenance;
  for (int i = 0; i < n; ++i)
    (i < train ? a : b).scenarios.push_back(set.scenarios[idx[i]]);
  return {std::move(a), std::move(b)};
}

ScenarioSet load_profiles(const std::string& path, const grid::NetworkCase& c) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profiles file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw ParseError(path + ": empty file");
  if (header.back() == '\r') header.pop_back();
  if (header != "day,hour,kind,entity,value")
    throw ParseError(path + ": expected header 'day,hour,kind,entity,value'");

  const int T = c.horizon;
  const int buses = static_cast<int>(c.buses.size());
  const int farms = static_cast<int>(c.wind_farms.size());
  std::map<int, int> farm_row;
  for (int f = 0; f < farms; ++f) farm_row[c.wind_farms[f].id] = f;

  std::map<int, DailyScenario> days;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string day_s, hour_s, kind, entity_s, value_s;
    if (!std::getline(ls, day_s, ',') || !std::getline(ls, hour_s, ',') ||
        !std::getline(ls, kind, ',') || !std::getline(ls, entity_s, ',') ||
        !std::getline(ls, value_s))
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 5 comma-separated fields");
    int day, hour, entity;
    double value;
    try {
      day = std::stoi(day_s);
      hour = std::stoi(hour_s);
      entity = std::stoi(entity_s);
      value = std::stod(value_s);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (hour < 0 || hour >= T)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": hour outside 0..T-1");
    if (value < 0.0 || value > 1.0 + 1e-9)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": factor outside [0,1]");
    value = std::min(value, 1.0);

    auto [it, fresh] = days.try_emplace(day);
    if (fresh) {
      it->second.load_factor = Matrix(buses, T);
      it->second.wind_factor = Matrix(farms, T);
    }
    if (kind == "load") {
      if (entity < 0 || entity >= buses)
        throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown bus " +
                              std::to_string(entity));
      it->second.load_factor.at(entity, hour) = value;
    } else if (kind == "wind") {
      auto fr = farm_row.find(entity);
      if (fr == farm_row.end())
        throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown farm " +
                              std::to_string(entity));
      it->second.wind_factor.at(fr->second, hour) = value;
    } else {
      throw ParseError(path + ":" + std::to_string(line_no) + ": kind must be 'load' or 'wind'");
    }
  }

  ScenarioSet out;
  out.provenance = path;
  for (auto& [day, scenario] : days) out.scenarios.push_back(std::move(scenario));
  return out;
}

void save_profiles(const ScenarioSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write profiles file: " + path);
  out << "day,hour,kind,entity,value\n";
  char buf[64];
  for (int d = 0; d < set.size(); ++d) {
    const auto& s = set.scenarios[d];
    for (int b = 0; b < s.load_factor.rows; ++b)
      for (int t = 0; t < s.load_factor.cols; ++t) {
        std::snprintf(buf, sizeof buf, "%.17g", s.load_factor.at(b, t));
        out << d << ',' << t << ",load," << b << ',' << buf << '\n';
      }
    for (int f = 0; f < s.wind_factor.rows; ++f)
      for (int t = 0; t < s.wind_factor.cols; ++t) {
        std::snprintf(buf, sizeof buf, "%.17g", s.wind_factor.at(f, t));
        out << d << ',' << t << ",wind," << f << ',' << buf << '\n';
      }
  }
}

Matrix default_load_shape(int bus_count, int T) {
  static const double kHourly[24] = {0.62, 0.58, 0.56, 0.55, 0.56, 0.60, 0.68, 0.76,
                                     0.82, 0.86, 0.88, 0.90, 0.91, 0.92, 0.93, 0.95,
                                     0.97, 1.00, 0.99, 0.96, 0.90, 0.82, 0.74, 0.67};
  Matrix out(bus_count, T);
  for (int b = 0; b < bus_count; ++b)
    for (int t = 0; t < T; ++t) {
      const double pos = T == 1 ? 0.0 : 23.0 * t / (T - 1);
      const int lo = static_cast<int>(pos);
      const int hi = std::min(lo + 1, 23);
      const double w = pos - lo;
      out.at(b, t) = (1.0 - w) * kHourly[lo] + w * kHourly[hi];
    }
  return out;
}

}  // namespace rsp::scenarios
