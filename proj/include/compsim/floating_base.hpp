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

// Velocity model of an arm riding on a moving base (here: the human torso).
//
// Full model:        xdot_E = J_B * xdot_B + J_M * thetadot
// Base rotation held (omega_B ~ 0):
//                    [v_E; w_E] = [v_B; 0] + [J_Mv; J_Mw] * thetadot
//
// All quantities are expressed in the inertial frame.

namespace compsim {

struct BaseState {
  Mat3 rotation = Mat3::Identity();  // orientation of the base frame
  Vec3 linear_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
};

struct FloatingJacobians {
  Mat6 base;          // J_B
  Jacobian manipulator;  // J_M, inertial frame
  Vec3 base_to_ee;    // p_BE, inertial frame
};

/// J_B = [[I, -skew(R_B p_BE^B)], [0, I]].
inline Mat6 base_jacobian(const Mat3& base_rotation, const Vec3& p_be_body) {
  Mat6 jb = Mat6::Identity();
  jb.block<3, 3>(0, 3) = -skew(base_rotation * p_be_body);
  return jb;
}

/// blockdiag(R_B, R_B) * J_body.
inline Jacobian world_jacobian(const Mat3& base_rotation,
                               const Jacobian& body_jacobian) {
  Jacobian jw;
  jw.topRows<3>() = base_rotation * body_jacobian.topRows<3>();
  jw.bottomRows<3>() = base_rotation * body_jacobian.bottomRows<3>();
  return jw;
}

inline FloatingJacobians floating_jacobians(const ArmModel& model,
                                            const JointVector& theta,
                                            const Mat3& base_rotation) {
  const Vec3 p_body = forward_kinematics(model, theta).position;
  return {base_jacobian(base_rotation, p_body),
          world_jacobian(base_rotation, geometric_jacobian(model, theta)),
          base_rotation * p_body};
}

/// Full composition J_B * xdot_B + J_M * thetadot.
inline Twist ee_twist_full(const BaseState& base, const FloatingJacobians& fj,
                           const JointVector& theta_dot) {
  Vec6 xb;
  xb << base.linear_velocity, base.angular_velocity;
  const Vec6 xe = fj.base * xb + fj.manipulator * theta_dot;
  return {xe.head<3>(), xe.tail<3>()};
}

/// Simplified composition used by the planners (base rotation neglected).
inline Twist ee_twist(const Vec3& v_base, const Jacobian& j_m,
                      const JointVector& theta_dot) {
  return {v_base + j_m.topRows<3>() * theta_dot, j_m.bottomRows<3>() * theta_dot};
}

}  // namespace compsim
