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

#include <cmath>

#include <gtest/gtest.h>

#include "compsim/motion.hpp"
#include "oracles.hpp"

namespace compsim {
namespace {

TEST(GenerateMotion, ZeroAmplitudeIsConstant) {
  MotionSpec s;
  s.amplitude = 0.0;
  for (MotionKind k : {MotionKind::UpDown, MotionKind::Random3D}) {
    s.kind = k;
    for (const HumanSample& h : generate_motion(s)) {
      EXPECT_EQ(h.position, s.origin);
      EXPECT_TRUE(h.velocity.isZero(0.0));
    }
  }
}

TEST(GenerateMotion, SampleGrid) {
  MotionSpec s;
  const auto tr = generate_motion(s);
  ASSERT_EQ(tr.size(), static_cast<std::size_t>((s.hold + s.duration) * s.rate) + 1);
  EXPECT_TRUE(on_uniform_grid(tr, s.rate));
  EXPECT_DOUBLE_EQ(tr.back().t, s.hold + s.duration);
}

TEST(GenerateMotion, UpDownMatchesTheAnalyticProfile) {
  MotionSpec s;  // defaults: 0.15 m, 5 s, 3 s hold, coupling 0.1
  const auto tr = generate_motion(s);
  double max_exc = 0.0;
  for (const HumanSample& h : tr) {
    const double z = oracle::stroke(h.t, s.amplitude, s.period, s.hold);
    EXPECT_NEAR(h.position.z(), s.origin.z() - z, 1e-12);
    EXPECT_NEAR(h.position.x(), s.origin.x() + s.cross_coupling * z, 1e-12);
    EXPECT_NEAR(h.position.y(), s.origin.y() + s.cross_coupling * z, 1e-12);
    max_exc = std::max(max_exc, std::abs(h.position.z() - s.origin.z()));
  }
  EXPECT_NEAR(max_exc, 0.15, 1e-9);
}

TEST(GenerateMotion, VelocityIsTheDerivative) {
  for (MotionKind k : {MotionKind::UpDown, MotionKind::LeftRight, MotionKind::ForwardBackward,
                       MotionKind::Random3D}) {
    MotionSpec s;
    s.kind = k;
    const auto tr = generate_motion(s);
    const double dt = 1.0 / s.rate;
    // Central-difference error bound dt^2 / 6 * max|p'''| for the stroke;
    // the random walk has knot spacing `period` and amplitude up to 2A.
    // The profiles are only C1 at knots (motion start, and every `period`
    // for the random walk): there the acceleration jumps and the bound is
    // first order, dt / 2 * max|p''|.
    const bool random = k == MotionKind::Random3D;
    const double w = M_PI / s.period * (random ? 1.0 : 2.0);
    const double accel = 2.0 * s.amplitude * w * w;
    const double jerk = 2.0 * s.amplitude * w * w * w;
    const auto near_knot = [&](double t) {
      const double u = (t - s.hold) / (random ? s.period : s.duration);
      return std::abs(u - std::round(u)) * (random ? s.period : s.duration) < dt * (1 + 1e-9);
    };
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
      const Vec3 fd = (tr[i + 1].position - tr[i - 1].position) / (2.0 * dt);
      const double bound = near_knot(tr[i].t) ? dt / 2.0 * accel : dt * dt / 6.0 * jerk;
      EXPECT_LT((fd - tr[i].velocity).cwiseAbs().maxCoeff(), bound + 1e-12)
          << to_string(k) << " t=" << tr[i].t;
    }
  }
}

TEST(GenerateMotion, StrokeDirections) {
  EXPECT_EQ(stroke_direction(MotionKind::UpDown), Vec3(0, 0, -1));
  EXPECT_EQ(stroke_direction(MotionKind::LeftRight), Vec3(0, 1, 0));
  EXPECT_EQ(stroke_direction(MotionKind::ForwardBackward), Vec3(1, 0, 0));
}

TEST(GenerateMotion, RandomIsSeededAndBounded) {
  MotionSpec s;
  s.kind = MotionKind::Random3D;
  const auto a = generate_motion(s);
  const auto b = generate_motion(s);
  s.seed = 2;
  const auto c = generate_motion(s);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_EQ(a[i].velocity, b[i].velocity);
    differs = differs || a[i].position != c[i].position;
    EXPECT_LE((a[i].position - s.origin).cwiseAbs().maxCoeff(), s.amplitude + 1e-15);
  }
  EXPECT_TRUE(differs);
  // Rest during the hold, so the home frame can be captured.
  EXPECT_TRUE(a.front().velocity.isZero(0.0));
}

TEST(GenerateMotion, OrientationIsHeldAndRotatesTheMotion) {
  MotionSpec s;
  s.orientation = UnitQuaternion(Eigen::AngleAxisd(M_PI / 2, Vec3::UnitZ()));
  s.kind = MotionKind::ForwardBackward;
  s.cross_coupling = 0.0;
  for (const HumanSample& h : generate_motion(s)) {
    EXPECT_TRUE(h.orientation.coeffs().isApprox(s.orientation.coeffs()));
    EXPECT_NEAR(h.position.x(), s.origin.x(), 1e-15);  // torso-forward is world +y
  }
}

TEST(MotionSpec, Validation) {
  MotionSpec s;
  EXPECT_NO_THROW(validate(s));
  s.cross_coupling = 0.31;
  EXPECT_THROW(validate(s), InputError);
  s = MotionSpec{};
  s.period = 0.0;
  EXPECT_THROW(validate(s), InputError);
  s = MotionSpec{};
  s.amplitude = -0.1;
  EXPECT_THROW(validate(s), InputError);
  EXPECT_THROW(parse_motion_kind("circle"), InputError);
  EXPECT_EQ(parse_motion_kind("lr"), MotionKind::LeftRight);
}

std::vector<HumanSample> sine_trace(double rate, double amplitude, double period, double span) {
  std::vector<HumanSample> tr;
  const double w = 2.0 * M_PI / period;
  for (int i = 0; i * (1.0 / rate) <= span + 1e-12; ++i) {
    HumanSample h;
    h.t = i / rate;
    h.position = Vec3(0.0, amplitude * std::sin(w * h.t), 0.0);
    h.velocity = Vec3(0.0, amplitude * w * std::cos(w * h.t), 0.0);
    h.orientation = UnitQuaternion(Eigen::AngleAxisd(0.1 * h.t, Vec3::UnitX()));
    tr.push_back(h);
  }
  return tr;
}

TEST(ResampleTrace, NativeRateIsIdentity) {
  const auto tr = sine_trace(60.0, 0.1, 2.0, 5.0);
  const auto out = resample_trace(tr, 60.0);
  ASSERT_EQ(out.size(), tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_NEAR(out[i].t, tr[i].t, 1e-12);
    EXPECT_LT((out[i].position - tr[i].position).norm(), 1e-12);
    EXPECT_LT((out[i].velocity - tr[i].velocity).norm(), 1e-12);
    EXPECT_LT(out[i].orientation.angularDistance(tr[i].orientation), 1e-12);
  }
}

TEST(ResampleTrace, InterpolationErrorBound) {
  const double a = 0.1, period = 2.0;
  const double w = 2.0 * M_PI / period;
  for (double src_rate : {120.0, 70.0}) {
    const auto tr = sine_trace(src_rate, a, period, 5.0);
    const auto out = resample_trace(tr, 60.0);
    const double h = 1.0 / src_rate;
    const double bound = a * w * w * h * h / 8.0;  // max|p''| h^2 / 8
    for (const HumanSample& s : out) {
      EXPECT_LE(std::abs(s.position.y() - a * std::sin(w * s.t)), bound + 1e-15) << s.t;
      EXPECT_LT(s.orientation.angularDistance(
                    UnitQuaternion(Eigen::AngleAxisd(0.1 * s.t, Vec3::UnitX()))),
                1e-12);
    }
  }
}

TEST(ResampleTrace, TwoSamplesGiveALinearSegment) {
  HumanSample a, b;
  a.t = 0.0;
  b.t = 1.0;
  b.position = Vec3(0.6, 0.0, -0.3);
  const auto out = resample_trace({a, b}, 10.0);
  ASSERT_EQ(out.size(), 11u);
  for (const HumanSample& s : out)
    EXPECT_TRUE(s.position.isApprox(s.t * b.position, 1e-12) || s.t == 0.0);
}

TEST(ResampleTrace, RejectsBadInput) {
  EXPECT_THROW(resample_trace({}, 60.0), InputError);
  HumanSample a, b;
  a.t = 1.0;
  b.t = 1.0;
  EXPECT_THROW(resample_trace({a, b}, 60.0), InputError);
  b.t = 2.0;
  EXPECT_THROW(resample_trace({a, b}, 0.0), InputError);
}

TEST(FillVelocities, CentralDifferences) {
  auto tr = sine_trace(100.0, 0.1, 2.0, 2.0);
  const auto truth = tr;
  fill_velocities(tr);
  const double w = M_PI, h = 0.01;
  for (std::size_t i = 1; i + 1 < tr.size(); ++i)
    EXPECT_NEAR(tr[i].velocity.y(), truth[i].velocity.y(), 0.1 * w * w * w * h * h / 6 + 1e-12);
}

TEST(PositionNoise, SeededAndOptional) {
  const auto tr = sine_trace(60.0, 0.1, 2.0, 1.0);
  const auto same = add_position_noise(tr, 0.0, 5);
  for (std::size_t i = 0; i < tr.size(); ++i) EXPECT_EQ(same[i].position, tr[i].position);
  const auto n1 = add_position_noise(tr, 0.001, 5);
  const auto n2 = add_position_noise(tr, 0.001, 5);
  double sq = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_EQ(n1[i].position, n2[i].position);
    sq += (n1[i].position - tr[i].position).squaredNorm();
  }
  EXPECT_NEAR(std::sqrt(sq / (3.0 * tr.size())), 0.001, 0.0003);
}

}  // namespace
}  // namespace compsim
