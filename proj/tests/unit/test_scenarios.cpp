#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "oracles/reference_values.hpp"
#include "rsp/scenarios.hpp"
#include "support/test_support.hpp"

namespace rsp {
namespace {

using scenarios::DailyScenario;
using scenarios::Matrix;
using scenarios::ScenarioSet;

scenarios::WindModel default_wind() { return scenarios::WindModel{}; }

TEST(WindCurve, FrozenReferencePoints) {
  const auto m = default_wind();
  EXPECT_NEAR(scenarios::wind_capacity_factor(9.45, m), testing::kWindCf_945, 1e-12);
  EXPECT_NEAR(scenarios::wind_capacity_factor(5.0, m), testing::kWindCf_50, 1e-12);
  EXPECT_NEAR(scenarios::wind_capacity_factor(12.0, m), testing::kWindCf_120, 1e-12);
}

TEST(WindCurve, PiecewiseBoundaries) {
  const auto m = default_wind();
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(0.0, m), 0.0);
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(3.999, m), 0.0);
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(4.0, m), 0.0);
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(13.61, m), 1.0);
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(20.0, m), 1.0);
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(25.0, m), 0.0);
  EXPECT_DOUBLE_EQ(scenarios::wind_capacity_factor(30.0, m), 0.0);
  // Monotone on the cubic segment.
  double prev = 0.0;
  for (double v = 4.0; v <= 13.61; v += 0.5) {
    const double cf = scenarios::wind_capacity_factor(v, m);
    EXPECT_GE(cf, prev);
    prev = cf;
  }
}

TEST(Profiles, SaveLoadRoundTrip) {
  const auto net = testing::desk3_case();
  scenarios::GeneratorModels models;
  models.farms = static_cast<int>(net.wind_farms.size());
  models.load.base_profiles.push_back(
      scenarios::default_load_shape(static_cast<int>(net.buses.size()), net.horizon));
  const ScenarioSet set = scenarios::sample_iid(models, 4, 99);

  const auto path = std::filesystem::temp_directory_path() / "rsp_profiles_roundtrip.csv";
  scenarios::save_profiles(set, path.string());
  const ScenarioSet back = scenarios::load_profiles(path.string(), net);
  ASSERT_EQ(back.size(), set.size());
  for (int i = 0; i < set.size(); ++i) EXPECT_EQ(back.scenarios[i], set.scenarios[i]) << i;
  std::filesystem::remove(path);
}

TEST(Profiles, ShippedPoolsLoad) {
  const auto d3 = scenarios::load_profiles(testing::data_dir() + "/profiles/desk3_days.csv",
                                           testing::desk3_case());
  EXPECT_EQ(d3.size(), 30);
  const auto d6 = scenarios::load_profiles(testing::data_dir() + "/profiles/demo6_days.csv",
                                           testing::demo6_case());
  EXPECT_EQ(d6.size(), 30);
  for (const auto& s : d3.scenarios)
    for (double v : s.load_factor.data) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
}

TEST(Profiles, RejectsBadCsv) {
  const auto net = testing::desk3_case();
  const auto dir = std::filesystem::temp_directory_path();

  const auto bad_header = dir / "rsp_bad_header.csv";
  {
    std::ofstream out(bad_header);
    out << "a,b,c\n";
  }
  EXPECT_THROW(scenarios::load_profiles(bad_header.string(), net), ParseError);

  const auto bad_factor = dir / "rsp_bad_factor.csv";
  {
    std::ofstream out(bad_factor);
    out << "day,hour,kind,entity,value\n0,0,load,0,1.5\n";
  }
  EXPECT_THROW(scenarios::load_profiles(bad_factor.string(), net), ValidationError);

  const auto bad_bus = dir / "rsp_bad_bus.csv";
  {
    std::ofstream out(bad_bus);
    out << "day,hour,kind,entity,value\n0,0,load,17,0.5\n";
  }
  EXPECT_THROW(scenarios::load_profiles(bad_bus.string(), net), ValidationError);

  std::filesystem::remove(bad_header);
  std::filesystem::remove(bad_factor);
  std::filesystem::remove(bad_bus);
}

TEST(Sampling, DeterministicBySeed) {
  const auto net = testing::desk3_case();
  scenarios::GeneratorModels models;
  models.farms = static_cast<int>(net.wind_farms.size());
  models.load.base_profiles.push_back(
      scenarios::default_load_shape(static_cast<int>(net.buses.size()), net.horizon));

  const ScenarioSet a = scenarios::sample_iid(models, 6, 123);
  const ScenarioSet b = scenarios::sample_iid(models, 6, 123);
  const ScenarioSet c = scenarios::sample_iid(models, 6, 124);
  ASSERT_EQ(a.size(), b.size());
  bool same = true, diff = false;
  for (int i = 0; i < a.size(); ++i) {
    same = same && a.scenarios[i] == b.scenarios[i];
    diff = diff || !(a.scenarios[i] == c.scenarios[i]);
  }
  EXPECT_TRUE(same);
  EXPECT_TRUE(diff);
  EXPECT_TRUE(a.seed.has_value());
}

TEST(Sampling, ResampleDistributionIsUniform) {
  const auto net = testing::single_bus_case();
  ScenarioSet source;
  for (int i = 0; i < 3; ++i)
    source.scenarios.push_back(testing::flat_scenario(net, 0.2 + 0.1 * i));
  const int K = 3000;
  const ScenarioSet draw = scenarios::sample_iid(source, K, 77);
  ASSERT_EQ(draw.size(), K);
  std::vector<int> count(3, 0);
  for (const auto& s : draw.scenarios)
    for (int i = 0; i < 3; ++i)
      if (s == source.scenarios[i]) ++count[i];
  const double expect = K / 3.0;
  const double sigma = std::sqrt(K * (1.0 / 3.0) * (2.0 / 3.0));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(count[i], expect, 5.0 * sigma) << i;
}

TEST(Sampling, WithoutReplacementRespectsSourceSize) {
  const auto net = testing::single_bus_case();
  ScenarioSet source;
  for (int i = 0; i < 5; ++i)
    source.scenarios.push_back(testing::flat_scenario(net, 0.1 + 0.15 * i));
  const ScenarioSet draw = scenarios::sample_iid(source, 5, 9, true);
  ASSERT_EQ(draw.size(), 5);
  // Every source scenario appears exactly once.
  for (const auto& s : source.scenarios) {
    int hits = 0;
    for (const auto& d : draw.scenarios)
      if (d == s) ++hits;
    EXPECT_EQ(hits, 1);
  }
  EXPECT_THROW(scenarios::sample_iid(source, 6, 9, true), DomainError);
}

TEST(Sampling, SplitIsDisjointAndPreservesMultiset) {
  const auto net = testing::single_bus_case();
  ScenarioSet source;
  for (int i = 0; i < 10; ++i)
    source.scenarios.push_back(testing::flat_scenario(net, 0.05 + 0.09 * i));
  const auto [train, test] = scenarios::split(source, 6, 5);
  ASSERT_EQ(train.size(), 6);
  ASSERT_EQ(test.size(), 4);
  std::vector<double> got, want;
  for (const auto& s : source.scenarios) want.push_back(s.load_factor.at(0, 0));
  for (const auto& s : train.scenarios) got.push_back(s.load_factor.at(0, 0));
  for (const auto& s : test.scenarios) got.push_back(s.load_factor.at(0, 0));
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
  EXPECT_THROW(scenarios::split(source, 11, 5), DomainError);
}

TEST(Synthesis, WindDayWithinBoundsAndDeterministic) {
  rng::Stream s1(31), s2(31);
  const Matrix a = scenarios::generate_wind_day(default_wind(), s1, 2, 24);
  const Matrix b = scenarios::generate_wind_day(default_wind(), s2, 2, 24);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rows, 2);
  EXPECT_EQ(a.cols, 24);
  for (double v : a.data) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Synthesis, LoadDayTracksBaseProfile) {
  scenarios::LoadNoiseModel model;
  model.base_profiles.push_back(scenarios::default_load_shape(2, 24));
  model.sigma_rel = 0.01;
  rng::Stream s(17);
  const Matrix day = scenarios::generate_load_day(model, s);
  const Matrix& base = model.base_profiles[0];
  ASSERT_EQ(day.rows, base.rows);
  ASSERT_EQ(day.cols, base.cols);
  for (int r = 0; r < day.rows; ++r)
    for (int t = 0; t < day.cols; ++t) {
      ASSERT_GE(day.at(r, t), 0.0);
      ASSERT_LE(day.at(r, t), 1.0);
      EXPECT_NEAR(day.at(r, t), base.at(r, t), 6.0 * model.sigma_rel * base.at(r, t) + 1e-12);
    }
}

TEST(Synthesis, DefaultLoadShapeIsSane) {
  const Matrix m = scenarios::default_load_shape(4, 24);
  EXPECT_EQ(m.rows, 4);
  EXPECT_EQ(m.cols, 24);
  double lo = 2.0, hi = -1.0;
  for (int t = 0; t < 24; ++t) {
    lo = std::min(lo, m.at(0, t));
    hi = std::max(hi, m.at(0, t));
    for (int r = 1; r < 4; ++r) EXPECT_DOUBLE_EQ(m.at(r, t), m.at(0, t));
  }
  EXPECT_GT(lo, 0.3);
  EXPECT_DOUBLE_EQ(hi, 1.0);
}

}  // namespace
}  // namespace rsp
