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
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "compsim/frame_pipeline.hpp"
#include "compsim/types.hpp"

// Synthetic torso-motion traces and trace resampling.

namespace compsim {

enum class MotionKind { UpDown, LeftRight, ForwardBackward, Random3D };

inline std::string_view to_string(MotionKind k) {
  switch (k) {
    case MotionKind::UpDown: return "ud";
    case MotionKind::LeftRight: return "lr";
    case MotionKind::ForwardBackward: return "fb";
    case MotionKind::Random3D: return "random3d";
  }
  return "ud";
}

inline MotionKind parse_motion_kind(std::string_view s) {
  if (s == "ud") return MotionKind::UpDown;
  if (s == "lr") return MotionKind::LeftRight;
  if (s == "fb") return MotionKind::ForwardBackward;
  if (s == "random3d" || s == "random") return MotionKind::Random3D;
  throw InputError("unknown motion '" + std::string(s) +
                   "' (expected ud, lr, fb or random3d)");
}

struct MotionSpec {
  MotionKind kind = MotionKind::UpDown;
  double amplitude = 0.15;      // m, maximum excursion per axis
  double period = 5.0;          // s, one stroke (1D) or knot spacing (3D)
  double duration = 30.0;       // s, motion time after the hold
  std::uint64_t seed = 1;       // Random3D only
  double cross_coupling = 0.1;  // fraction of amplitude leaked onto off-axes
  double hold = 3.0;            // s at rest before the motion starts
  double rate = 60.0;           // Hz
  Vec3 origin = Vec3(0.0, 0.0, 1.3);
  UnitQuaternion orientation = UnitQuaternion::Identity();
};

inline void validate(const MotionSpec& s) {
  if (!(s.amplitude >= 0.0) || !std::isfinite(s.amplitude))
    throw InputError("motion: amplitude must be >= 0");
  if (!(s.period > 0.0)) throw InputError("motion: period must be > 0");
  if (!(s.duration > 0.0)) throw InputError("motion: duration must be > 0");
  if (!(s.cross_coupling >= 0.0 && s.cross_coupling <= 0.3))
    throw InputError("motion: cross_coupling must lie in [0, 0.3]");
  if (!(s.hold >= 0.0)) throw InputError("motion: hold must be >= 0");
  if (!(s.rate > 0.0)) throw InputError("motion: rate must be > 0");
}

/// Stroke axis and direction in the torso frame for a 1D motion.
/// Up-down strokes go down first, left-right left, forward-backward forward.
inline Vec3 stroke_direction(MotionKind k) {
  switch (k) {
    case MotionKind::UpDown: return -Vec3::UnitZ();
    case MotionKind::LeftRight: return Vec3::UnitY();
    case MotionKind::ForwardBackward: return Vec3::UnitX();
    case MotionKind::Random3D: break;
  }
  return Vec3::Zero();
}

namespace detail {

// Reflects x back into [-a, a]; |x| <= 2a assumed.
inline double reflect(double x, double a) {
  if (x > a) return 2.0 * a - x;
  if (x < -a) return -2.0 * a - x;
  return x;
}

// Seeded random walk with cosine interpolation between knots: C1, zero
// velocity at every knot.
class RandomWalk3 {
 public:
  RandomWalk3(double amplitude, double spacing, double span, std::uint64_t seed)
      : spacing_(spacing) {
    const auto knots = static_cast<std::size_t>(std::ceil(span / spacing)) + 2;
    knots_.assign(knots, Vec3::Zero());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> step(-amplitude, amplitude);
    for (std::size_t j = 1; j < knots; ++j)
      for (int a = 0; a < 3; ++a)
        knots_[j][a] = reflect(knots_[j - 1][a] + step(rng), amplitude);
  }

  void eval(double tau, Vec3& p, Vec3& v) const {
    if (tau <= 0.0) {
      p.setZero();
      v.setZero();
      return;
    }
    auto j = static_cast<std::size_t>(std::floor(tau / spacing_));
    if (j + 1 >= knots_.size()) j = knots_.size() - 2;
    const double u = (tau - static_cast<double>(j) * spacing_) / spacing_;
    const Vec3 delta = knots_[j + 1] - knots_[j];
    p = knots_[j] + delta * (1.0 - std::cos(M_PI * u)) / 2.0;
    v = delta * (M_PI / (2.0 * spacing_)) * std::sin(M_PI * u);
  }

 private:
  double spacing_;
  std::vector<Vec3> knots_;
};

}  // namespace detail

/// Samples a synthetic torso trace at spec.rate over [0, hold + duration].
///
/// 1D kinds repeat a raised-cosine stroke A (1 - cos(2 pi tau / T)) / 2
/// along the stroke direction, with cross_coupling * A of the same profile
/// on both off-axes. Random3D runs an independent reflected random walk per
/// axis with knots every `period` seconds. Orientation stays constant and
/// velocities are the analytic derivative.
inline std::vector<HumanSample> generate_motion(const MotionSpec& spec) {
  validate(spec);
  const double total = spec.hold + spec.duration;
  const auto n = static_cast<std::size_t>(std::floor(total * spec.rate + 1e-9)) + 1;
  const Mat3 r0 = spec.orientation.normalized().toRotationMatrix();
  const double a = spec.amplitude;

  Vec3 profile_axis = Vec3::Zero();
  if (spec.kind != MotionKind::Random3D) {
    const Vec3 dir = stroke_direction(spec.kind);
    const Vec3 off = Vec3::Ones() - dir.cwiseAbs();
    profile_axis = dir + spec.cross_coupling * off;
  }
  const detail::RandomWalk3 walk(a, spec.period, spec.duration, spec.seed);

  std::vector<HumanSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    HumanSample s;
    s.t = static_cast<double>(i) / spec.rate;
    s.orientation = spec.orientation.normalized();
    const double tau = s.t - spec.hold;
    Vec3 p = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    if (spec.kind == MotionKind::Random3D) {
      walk.eval(tau, p, v);
    } else if (tau > 0.0) {
      const double w = 2.0 * M_PI / spec.period;
      p = a * (1.0 - std::cos(w * tau)) / 2.0 * profile_axis;
      v = a * w * std::sin(w * tau) / 2.0 * profile_axis;
    }
    s.position = spec.origin + r0 * p;
    s.velocity = r0 * v;
    out.push_back(s);
  }
  return out;
}

inline void check_monotone(const std::vector<HumanSample>& trace) {
  if (trace.empty()) throw InputError("trace is empty");
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (!(trace[i].t > trace[i - 1].t))
      throw InputError("trace timestamps must be strictly increasing (sample " +
                       std::to_string(i) + ", t = " + std::to_string(trace[i].t) +
                       ")");
}

/// Replaces velocities with central differences of position (one-sided at
/// the ends).
inline void fill_velocities(std::vector<HumanSample>& trace) {
  check_monotone(trace);
  const std::size_t n = trace.size();
  if (n == 1) {
    trace[0].velocity.setZero();
    return;
  }
  std::vector<Vec3> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    v[i] = (trace[hi].position - trace[lo].position) / (trace[hi].t - trace[lo].t);
  }
  for (std::size_t i = 0; i < n; ++i) trace[i].velocity = v[i];
}

/// Resamples onto a uniform grid starting at the first timestamp. Positions
/// and velocities are interpolated linearly, orientations by slerp.
inline std::vector<HumanSample> resample_trace(const std::vector<HumanSample>& trace,
                                               double rate) {
  check_monotone(trace);
  if (!(rate > 0.0)) throw InputError("resample: rate must be > 0");
  const double t0 = trace.front().t;
  const double span = trace.back().t - t0;
  const auto n = static_cast<std::size_t>(std::floor(span * rate + 1e-9)) + 1;
  std::vector<HumanSample> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) / rate;
    while (seg + 2 < trace.size() && trace[seg + 1].t <= t) ++seg;
    HumanSample s;
    s.t = t;
    if (trace.size() == 1) {
      s = trace.front();
      s.t = t;
    } else {
      const HumanSample& a = trace[seg];
      const HumanSample& b = trace[seg + 1];
      const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
      s.position = a.position + u * (b.position - a.position);
      s.velocity = a.velocity + u * (b.velocity - a.velocity);
      s.orientation = a.orientation.slerp(u, b.orientation).normalized();
    }
    out.push_back(s);
  }
  return out;
}

/// True if the trace timestamps sit on the grid t0 + i / rate.
inline bool on_uniform_grid(const std::vector<HumanSample>& trace, double rate,
                            double tol = 1e-9) {
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (std::abs(trace[i].t - (trace.front().t + static_cast<double>(i) / rate)) > tol)
      return false;
  return true;
}

/// Adds zero-mean Gaussian noise to measured positions.
inline std::vector<HumanSample> add_position_noise(std::vector<HumanSample> trace,
                                                   double stddev,
                                                   std::uint64_t seed) {
  if (stddev <= 0.0) return trace;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, stddev);
  for (auto& s : trace)
    for (int a = 0; a < 3; ++a) s.position[a] += noise(rng);
  return trace;
}

}  // namespace compsim
