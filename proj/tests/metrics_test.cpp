// Copyright 2026 The compsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "compsim/metrics.hpp"
#include "oracles.hpp"

namespace compsim {
namespace {

TEST(AxisStats, ConstantSeries) {
  const std::vector<double> x(400, 1.25);
  const AxisStats s = axis_stats(x);
  EXPECT_EQ(s.mean, 1.25);
  EXPECT_EQ(s.std, 0.0);
  EXPECT_EQ(s.mean_error, 0.0);
  EXPECT_EQ(s.max_deviation, 0.0);
}

TEST(AxisStats, HandComputedExample) {
  // Baseline window 1 s at 1 Hz covers t = 0, 1: the samples 1 and 2.
  const std::vector<double> x = {1, 2, 3, 4};
  const AxisStats s = axis_stats(x, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, 1.2910, 5e-5);
  EXPECT_DOUBLE_EQ(s.baseline_mean, 1.5);
  EXPECT_DOUBLE_EQ(s.mean_error, 1.0);
  EXPECT_DOUBLE_EQ(s.max_deviation, 1.5);
}

TEST(AxisStats, BaselineWindowCountsSamplesUpToTheWindow) {
  EXPECT_EQ(baseline_count(3.0, 60.0), 181u);
  EXPECT_EQ(baseline_count(0.0, 60.0), 1u);
  EXPECT_EQ(baseline_count(0.1, 30.0), 4u);  // 0.1 * 30 = 3.0000000000000004
}

TEST(AxisStats, MatchesTwoPassOracle) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> len(200, 10000);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(static_cast<std::size_t>(len(rng)));
    const double offset = 1.5 * n(rng);
    for (double& v : x) v = offset + 0.05 * n(rng);
    const AxisStats s = axis_stats(x, 3.0, 60.0);
    const auto o = oracle::brute_stats(x, baseline_count(3.0, 60.0));
    EXPECT_NEAR(s.mean, o.mean, 1e-12);
    EXPECT_NEAR(s.std, o.std, 1e-12);
    EXPECT_NEAR(s.baseline_mean, o.baseline_mean, 1e-12);
    EXPECT_NEAR(s.mean_error, o.mean_error, 1e-12);
    EXPECT_NEAR(s.max_deviation, o.max_deviation, 1e-12);
  }
}

TEST(AxisStats, Preconditions) {
  EXPECT_THROW(axis_stats(std::vector<double>{1.0}), InputError);
  EXPECT_THROW(axis_stats(std::vector<double>(100, 0.0), 3.0, 60.0), InputError);
  EXPECT_THROW(axis_stats(std::vector<double>(500, 0.0), 3.0, 0.0), InputError);
}

TEST(DistanceIndex, MatchesBruteForce) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<std::vector<double>, 3> xyz;
    std::array<oracle::BruteStats, 3> brute;
    for (std::size_t a = 0; a < 3; ++a) {
      xyz[a].resize(1000);
      double drift = 0.0;
      for (double& v : xyz[a]) v = (drift += 0.001 * n(rng));
      brute[a] = oracle::brute_stats(xyz[a], baseline_count(3.0, 60.0));
    }
    const double d = distance_index(xyz[0], xyz[1], xyz[2]);
    EXPECT_NEAR(d, oracle::brute_distance_index(brute), 1e-12);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
}

TEST(DistanceIndex, DegenerateAndExtremeCases) {
  const std::vector<double> flat(501, 0.3);
  EXPECT_EQ(distance_index(flat, flat, flat), 0.0);

  // Final mean equal to the baseline mean: zero numerator.
  std::vector<double> sym(501, 0.0);
  for (std::size_t i = 181; i < sym.size(); ++i) sym[i] = (i % 2) ? 1.0 : -1.0;
  EXPECT_EQ(axis_stats(sym).mean_error, 0.0);
  EXPECT_NEAR(distance_index(sym, flat, flat), 0.0, 1e-12);

  // Baseline on one extreme of a two-valued series: e = e_max, D_E = 1.
  std::vector<double> two(362, 1.0);
  std::fill(two.begin(), two.begin() + 181, 0.0);
  const std::vector<double> flat2(362, -0.1);
  const AxisStats t = axis_stats(two);
  EXPECT_DOUBLE_EQ(t.mean_error, t.max_deviation);
  EXPECT_DOUBLE_EQ(distance_index(two, flat2, flat2), 1.0);
}

TEST(DistanceIndex, InvariantUnderConstantShifts) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> n(0.0, 0.01);
  std::array<std::vector<double>, 3> xyz;
  for (auto& v : xyz) {
    v.resize(800);
    double drift = 0.0;
    for (double& e : v) e = (drift += n(rng));
  }
  const double d0 = distance_index(xyz[0], xyz[1], xyz[2]);
  for (double& e : xyz[1]) e += 2.5;
  EXPECT_NEAR(distance_index(xyz[0], xyz[1], xyz[2]), d0, 1e-12);
}

// Published 1D results (mean, initial mean, e), in units of 1e-4 m so that
// the consistency check is exact integer arithmetic.
struct Published {
  const char* what;
  std::int64_t mean, initial, error;
};

TEST(DistanceIndex, PublishedStatsAreInternallyConsistent) {
  const Published rows[] = {
      {"NBM U-D z", 19377, 19089, 288},  {"NBM L-R y", -5291, -5606, 315},
      {"NBM F-B x", 884, 1280, 396},     {"RJM U-D z", 19489, 19649, 160},
      {"RJM L-R y", -4589, -4993, 404},  {"RJM F-B x", -24, -188, 164},
  };
  for (const Published& r : rows)
    EXPECT_EQ(std::llabs(r.mean - r.initial), r.error) << r.what;
}

TEST(CompareReport, IdenticalLogsGiveZeroDeltas) {
  MotionSpec s;
  s.duration = 6.0;
  const TraceLog log = run_compensation(SimConfig{}, generate_motion(s));
  const Comparison c = compare_report(log, log);
  for (const AxisStats& d : c.delta) {
    EXPECT_EQ(d.mean, 0.0);
    EXPECT_EQ(d.std, 0.0);
    EXPECT_EQ(d.mean_error, 0.0);
  }
  EXPECT_EQ(c.distance_index_delta, 0.0);
  TraceLog other = log;
  other.scenario = "lr";
  EXPECT_THROW(compare_report(log, other), InputError);
}

TEST(Evaluate, UsesGroundTruthPositions) {
  MotionSpec s;
  s.duration = 6.0;
  const TraceLog log = run_compensation(SimConfig{}, generate_motion(s));
  const EvalReport r = evaluate(log);
  std::vector<double> z;
  for (const LogEntry& e : log.entries) z.push_back(e.ee_world.z());
  const AxisStats sz = axis_stats(z, 3.0, log.rate);
  EXPECT_EQ(r.axes[2].mean, sz.mean);
  EXPECT_EQ(r.method, "rjm");
}

}  // namespace
}  // namespace compsim
