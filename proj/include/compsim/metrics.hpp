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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "compsim/planners.hpp"
#include "compsim/simulation.hpp"
#include "compsim/types.hpp"

// Stabilization indices over the ground-truth EE world position.
//
//   mean_error = |mean(rho) - mean(rho over t <= baseline)|
//   D_E        = |e| / |e_max|, e_max = max_i |mean(rho) - rho(i)| per axis

namespace compsim {

inline constexpr double kDefaultBaselineWindow = 3.0;  // s

struct AxisStats {
  double mean = 0.0;
  double std = 0.0;            // sample standard deviation (n - 1)
  double mean_error = 0.0;
  double baseline_mean = 0.0;
  double max_deviation = 0.0;  // e_max, max |mean - rho(i)|
};

struct EvalReport {
  std::string scenario;
  std::string method;
  std::array<AxisStats, 3> axes;
  double distance_index = 0.0;  // D_E
};

struct Comparison {
  EvalReport a;
  EvalReport b;
  std::array<AxisStats, 3> delta;  // b - a, field by field
  double distance_index_delta = 0.0;
};

/// Number of leading samples with t = i / rate <= window.
inline std::size_t baseline_count(double window, double rate) {
  return static_cast<std::size_t>(std::floor(window * rate + 1e-9)) + 1;
}

inline AxisStats axis_stats(std::span<const double> series,
                            double baseline_window = kDefaultBaselineWindow,
                            double rate = 60.0) {
  const std::size_t n = series.size();
  if (n < 2) throw InputError("axis_stats: series needs at least 2 samples");
  if (!(rate > 0.0) || !(baseline_window >= 0.0))
    throw InputError("axis_stats: rate must be > 0 and baseline window >= 0");
  const std::size_t nb = baseline_count(baseline_window, rate);
  if (nb >= n)
    throw InputError("axis_stats: baseline window must be shorter than the series");

  AxisStats s;
  double sum = 0.0;
  for (double x : series) sum += x;
  s.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : series) {
    const double d = x - s.mean;
    ss += d * d;
    s.max_deviation = std::max(s.max_deviation, std::abs(d));
  }
  s.std = std::sqrt(ss / static_cast<double>(n - 1));
  double bsum = 0.0;
  for (std::size_t i = 0; i < nb; ++i) bsum += series[i];
  s.baseline_mean = bsum / static_cast<double>(nb);
  s.mean_error = std::abs(s.mean - s.baseline_mean);
  return s;
}

/// D_E from per-axis stats; 0 when every axis is constant.
inline double distance_index(const std::array<AxisStats, 3>& axes) {
  double num = 0.0;
  double den = 0.0;
  for (const AxisStats& a : axes) {
    // The baseline mean lies inside the sample hull, so e <= e_max up to
    // rounding of the two means.
    const double tol = 1e-12 * (std::abs(a.mean) + 1.0);
    if (a.mean_error > a.max_deviation + tol)
      throw NumericalError("distance_index: mean error exceeds max deviation");
    num += a.mean_error * a.mean_error;
    den += a.max_deviation * a.max_deviation;
  }
  if (den == 0.0) return 0.0;
  return std::min(std::sqrt(num) / std::sqrt(den), 1.0);
}

inline double distance_index(std::span<const double> x, std::span<const double> y,
                             std::span<const double> z,
                             double baseline_window = kDefaultBaselineWindow,
                             double rate = 60.0) {
  return distance_index({axis_stats(x, baseline_window, rate),
                         axis_stats(y, baseline_window, rate),
                         axis_stats(z, baseline_window, rate)});
}

inline EvalReport evaluate(const TraceLog& log,
                           double baseline_window = kDefaultBaselineWindow) {
  std::array<std::vector<double>, 3> series;
  for (auto& s : series) s.reserve(log.entries.size());
  for (const LogEntry& e : log.entries)
    for (int a = 0; a < 3; ++a) series[static_cast<std::size_t>(a)].push_back(e.ee_world[a]);
  EvalReport r;
  r.scenario = log.scenario;
  r.method = std::string(to_string(log.method));
  for (std::size_t a = 0; a < 3; ++a)
    r.axes[a] = axis_stats(series[a], baseline_window, log.rate);
  r.distance_index = distance_index(r.axes);
  return r;
}

inline Comparison compare_report(const TraceLog& log_a, const TraceLog& log_b,
                                 double baseline_window = kDefaultBaselineWindow) {
  if (log_a.scenario != log_b.scenario)
    throw InputError("compare: scenario mismatch ('" + log_a.scenario + "' vs '" +
                     log_b.scenario + "')");
  Comparison c;
  c.a = evaluate(log_a, baseline_window);
  c.b = evaluate(log_b, baseline_window);
  for (std::size_t i = 0; i < 3; ++i) {
    const AxisStats& x = c.a.axes[i];
    const AxisStats& y = c.b.axes[i];
    c.delta[i] = {y.mean - x.mean, y.std - x.std, y.mean_error - x.mean_error,
                  y.baseline_mean - x.baseline_mean, y.max_deviation - x.max_deviation};
  }
  c.distance_index_delta = c.b.distance_index - c.a.distance_index;
  return c;
}

}  // namespace compsim
