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

#include <random>

#include <gtest/gtest.h>

#include "compsim/frame_pipeline.hpp"
#include "oracles.hpp"

namespace compsim {
namespace {

HumanSample at_rest(const Vec3& p, const UnitQuaternion& q = UnitQuaternion::Identity()) {
  HumanSample s;
  s.position = p;
  s.orientation = q;
  return s;
}

const JointVector kTheta = (JointVector() << 0.1, -0.2, -0.5, 0.4, 1.0, -0.3).finished();

TEST(CaptureHome, RejectsAMovingTorso) {
  HumanSample s = at_rest(Vec3(0, 0, 1));
  s.velocity = Vec3(0.0, 0.03, 0.0);
  EXPECT_THROW(capture_home(s, default_arm_model(), kTheta), InputError);
  s.velocity = Vec3(0.0, 0.01, 0.0);
  EXPECT_NO_THROW(capture_home(s, default_arm_model(), kTheta));
}

TEST(CaptureHome, FreezesTheEePose) {
  const HomeFrame h = capture_home(at_rest(Vec3(1, 2, 3)), default_arm_model(), kTheta);
  const Pose fk = forward_kinematics(default_arm_model(), kTheta);
  EXPECT_EQ(h.ee_home().position, fk.position);
  EXPECT_EQ(h.torso_position(), Vec3(1, 2, 3));
}

TEST(BaseDisplacement, TorsoMoveYieldsNegatedDisplacement) {
  const HomeFrame h = capture_home(at_rest(Vec3(0, 0, 1.3)), default_arm_model(), kTheta);
  const Vec3 d(0.02, -0.05, 0.1);
  EXPECT_TRUE(base_displacement(h, at_rest(Vec3(0, 0, 1.3) + d)).isApprox(-d, 1e-15));
}

TEST(BaseDisplacement, ExpressedInTheHomeFrame) {
  // Torso yawed by 90 deg: a world +x move is a home-frame -y move, so the
  // displacement (start minus now) is +y.
  const UnitQuaternion yaw(Eigen::AngleAxisd(M_PI / 2, Vec3::UnitZ()));
  const HomeFrame h = capture_home(at_rest(Vec3::Zero(), yaw), default_arm_model(), kTheta);
  EXPECT_TRUE(base_displacement(h, at_rest(Vec3(0.1, 0, 0), yaw)).isApprox(Vec3(0, 0.1, 0), 1e-15));
  HumanSample moving = at_rest(Vec3::Zero(), yaw);
  moving.velocity = Vec3(0.1, 0, 0);
  EXPECT_TRUE(base_velocity_local(h, moving).isApprox(Vec3(0, -0.1, 0), 1e-15));
}

TEST(EePositionVariation, VanishesAtExactCompensation) {
  // The torso moved by d and the arm moved its EE by -d relative to the
  // base: the EE is back where it started, so no correction remains.
  const ArmModel m = default_arm_model();
  const HomeFrame h = capture_home(at_rest(Vec3::Zero()), m, kTheta);
  const Vec3 d(0.01, 0.02, -0.03);
  Pose moved = h.ee_home();
  moved.position -= d;
  EXPECT_LT(ee_position_variation(h, at_rest(d), moved).norm(), 1e-15);
}

TEST(EePositionVariation, BaseMovedArmStill) {
  const HomeFrame h = capture_home(at_rest(Vec3::Zero()), default_arm_model(), kTheta);
  const Vec3 d(0.0, 0.0, 0.05);
  EXPECT_TRUE(ee_position_variation(h, at_rest(d), h.ee_home()).isApprox(-d, 1e-15));
}

TEST(EePositionVariation, BaseStillEeMoved) {
  // Start-minus-now convention: an EE that drifted by +q needs -q.
  const HomeFrame h = capture_home(at_rest(Vec3::Zero()), default_arm_model(), kTheta);
  const Vec3 q(0.01, -0.02, 0.0);
  Pose now = h.ee_home();
  now.position += q;
  EXPECT_TRUE(ee_position_variation(h, at_rest(Vec3::Zero()), now).isApprox(-q, 1e-15));
}

TEST(EeOrientationError, ZeroWhenUnchangedAndSmallAngleSign) {
  const HomeFrame h = capture_home(at_rest(Vec3::Zero()), default_arm_model(), kTheta);
  EXPECT_LT(ee_orientation_error(h, h.ee_home().orientation).delta_eps.norm(), 1e-15);
  // EE rotated by +a about z from home: the error asks for -a about z.
  const UnitQuaternion now =
      UnitQuaternion(Eigen::AngleAxisd(0.02, Vec3::UnitZ())) * h.ee_home().orientation;
  const QuatError e = ee_orientation_error(h, now);
  EXPECT_NEAR(e.delta_eps.z(), -std::sin(0.01), 1e-14);
}

TEST(FramePipeline, InvariantUnderAGlobalRotation) {
  // Rotating the inertial frame must not change anything expressed in the
  // home frame.
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  const ArmModel m = default_arm_model();
  for (int trial = 0; trial < 20; ++trial) {
    const UnitQuaternion g = UnitQuaternion(n(rng), n(rng), n(rng), n(rng)).normalized();
    const UnitQuaternion torso = UnitQuaternion(n(rng), n(rng), n(rng), n(rng)).normalized();
    const Vec3 p0(n(rng), n(rng), n(rng)), p1(n(rng), n(rng), n(rng)), v(n(rng), n(rng), n(rng));
    HumanSample a0 = at_rest(p0, torso), a1 = at_rest(p1, torso);
    a1.velocity = v;
    HumanSample b0 = at_rest(g * p0, g * torso), b1 = at_rest(g * p1, g * torso);
    b1.velocity = g * v;
    const HomeFrame ha = capture_home(a0, m, kTheta), hb = capture_home(b0, m, kTheta);
    EXPECT_TRUE(base_displacement(ha, a1).isApprox(base_displacement(hb, b1), 1e-12));
    EXPECT_TRUE(base_velocity_local(ha, a1).isApprox(base_velocity_local(hb, b1), 1e-12));
  }
}

}  // namespace
}  // namespace compsim
