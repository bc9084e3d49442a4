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

#include "compsim/kinematics.hpp"
#include "compsim/types.hpp"

// Converts streamed torso poses into planner inputs, all expressed in the
// torso frame frozen at the moment compensation starts (the home frame).
//
// Variations use the "start minus now" convention throughout: a torso that
// moves +d yields a base displacement of -d, and an arm whose EE moved +q
// relative to its base yields -q. Their sum is therefore the correction
// the EE still needs, and it vanishes when compensation is exact.

namespace compsim {

/// One sample of the torso stream, inertial frame.
struct HumanSample {
  double t = 0.0;                                         // s
  Vec3 position = Vec3::Zero();                           // m
  UnitQuaternion orientation = UnitQuaternion::Identity();
  Vec3 velocity = Vec3::Zero();                           // m/s
};

/// Default quiescence threshold for capturing the home frame, m/s.
inline constexpr double kDefaultQuiescenceSpeed = 0.02;

class HomeFrame {
 public:
  HomeFrame(const Vec3& torso_position, const Mat3& inertial_to_home,
            const Pose& ee_home)
      : torso_position_(torso_position),
        inertial_to_home_(inertial_to_home),
        ee_home_(ee_home) {}

  const Vec3& torso_position() const { return torso_position_; }
  /// Rotation taking inertial-frame vectors into the home frame.
  const Mat3& inertial_to_home() const { return inertial_to_home_; }
  /// EE pose in the arm base frame at capture time.
  const Pose& ee_home() const { return ee_home_; }

 private:
  Vec3 torso_position_;
  Mat3 inertial_to_home_;
  Pose ee_home_;
};

/// Freezes the home frame. Throws InputError if the torso is moving faster
/// than `quiescence_speed`.
inline HomeFrame capture_home(const HumanSample& sample, const ArmModel& model,
                              const JointVector& theta,
                              double quiescence_speed = kDefaultQuiescenceSpeed) {
  const double speed = sample.velocity.norm();
  if (!(speed < quiescence_speed))
    throw InputError("cannot capture home frame: torso not at rest (|v| = " +
                     std::to_string(speed) + " m/s, limit " +
                     std::to_string(quiescence_speed) + " m/s)");
  return HomeFrame(sample.position,
                   sample.orientation.normalized().toRotationMatrix().transpose(),
                   forward_kinematics(model, theta));
}

/// R_I->H0 (p_H(t0) - p_H(t_k)). Equal to the base displacement because the
/// base rides rigidly on the torso.
inline Vec3 base_displacement(const HomeFrame& home, const HumanSample& sample) {
  return home.inertial_to_home() * (home.torso_position() - sample.position);
}

/// R_I->H0 v_H(t_k): the base velocity seen in the home frame.
inline Vec3 base_velocity_local(const HomeFrame& home, const HumanSample& sample) {
  return home.inertial_to_home() * sample.velocity;
}

/// Position correction still required at the EE, home frame:
/// (p_H(t0) - p_H(t_k)) + (p_E(t0) - p_E(t_k)) with the EE terms taken in
/// the arm base frame (aligned with the home frame while the torso keeps
/// its orientation).
inline Vec3 ee_position_variation(const HomeFrame& home, const HumanSample& sample,
                                  const Pose& fk_now) {
  return base_displacement(home, sample) +
         (home.ee_home().position - fk_now.position);
}

inline QuatError ee_orientation_error(const HomeFrame& home,
                                      const UnitQuaternion& ee_now) {
  return quat_error(home.ee_home().orientation, ee_now);
}

}  // namespace compsim
