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

#include <array>
#include <cmath>
#include <string>

#include "compsim/types.hpp"

namespace compsim {

/// Skew-symmetric matrix such that skew(k) * v == k.cross(v).
inline Mat3 skew(const Vec3& k) {
  Mat3 m;
  m << 0.0, -k.z(), k.y(),
       k.z(), 0.0, -k.x(),
       -k.y(), k.x(), 0.0;
  return m;
}

/// Hamilton product. The result is renormalized when the norm drifts by
/// more than 1e-12.
inline UnitQuaternion quat_multiply(const UnitQuaternion& a,
                                    const UnitQuaternion& b) {
  UnitQuaternion q = a * b;
  if (std::abs(q.norm() - 1.0) > 1e-12) q.normalize();
  return q;
}

struct QuatError {
  double delta_eta = 1.0;
  Vec3 delta_eps = Vec3::Zero();
};

/// Orientation error dQ = desired * current^-1, sign-flipped so that
/// delta_eta >= 0 (the shorter of the two equivalent rotations).
inline QuatError quat_error(const UnitQuaternion& desired,
                            const UnitQuaternion& current) {
  UnitQuaternion dq = quat_multiply(desired, current.conjugate());
  if (dq.w() < 0.0) dq.coeffs() = -dq.coeffs();
  return {dq.w(), dq.vec()};
}

/// One revolute joint: a fixed transform from the previous joint frame
/// (translation, then rotation) followed by a rotation about `axis`.
struct JointSpec {
  Vec3 origin = Vec3::Zero();
  UnitQuaternion rotation = UnitQuaternion::Identity();
  Vec3 axis = Vec3::UnitZ();
};

/// Kinematic description of the 6-DoF serial arm, expressed in the arm
/// base frame.
struct ArmModel {
  std::string name = "arm";
  std::array<JointSpec, 6> joints;
  Pose ee_offset;
  JointVector pos_min = JointVector::Constant(-M_PI);
  JointVector pos_max = JointVector::Constant(M_PI);
  JointVector vel_min = JointVector::Constant(-0.1);
  JointVector vel_max = JointVector::Constant(0.1);
};

/// Throws InputError if the model breaks an invariant.
inline void validate(const ArmModel& model) {
  for (int i = 0; i < 6; ++i) {
    const JointSpec& j = model.joints[static_cast<std::size_t>(i)];
    if (!j.origin.allFinite() || !j.axis.allFinite() ||
        !j.rotation.coeffs().allFinite())
      throw InputError("joint " + std::to_string(i + 1) +
                       ": non-finite kinematic parameter");
    if (std::abs(j.axis.norm() - 1.0) > 1e-9)
      throw InputError("joint " + std::to_string(i + 1) +
                       ": axis must be a unit vector");
    if (std::abs(j.rotation.norm() - 1.0) > 1e-9)
      throw InputError("joint " + std::to_string(i + 1) +
                       ": rotation must be a unit quaternion");
    if (!(model.pos_min[i] < model.pos_max[i]))
      throw InputError("joint " + std::to_string(i + 1) +
                       ": position limits require min < max");
    if (!(model.vel_min[i] < 0.0 && model.vel_max[i] > 0.0))
      throw InputError("joint " + std::to_string(i + 1) +
                       ": velocity limits require min < 0 < max");
  }
  if (!model.ee_offset.position.allFinite() ||
      std::abs(model.ee_offset.orientation.norm() - 1.0) > 1e-9)
    throw InputError("ee_offset: invalid transform");
}

/// Shoulder-mounted anthropomorphic arm used throughout the tests.
///
/// Base frame at the mount: x forward, y left, z up. Joint 1 yaws about z,
/// joints 2 and 3 pitch about y (shoulder, elbow), joints 4-6 form a
/// spherical wrist (roll x, pitch y, roll x). At theta = 0 the upper arm
/// hangs down and the forearm points forward; the wrist is aligned
/// (joints 4 and 6 coaxial), so the zero pose is singular.
///
/// Zero-pose geometry: shoulder pitch at (0, 0, -0.10), elbow at
/// (0, 0, -0.45), wrist centre at (0.35, 0, -0.45), tool point at
/// (0.50, 0, -0.45), tool frame aligned with the base frame.
inline ArmModel default_arm_model() {
  ArmModel m;
  m.name = "sra6-default";
  m.joints[0] = {Vec3(0.0, 0.0, 0.0), UnitQuaternion::Identity(), Vec3::UnitZ()};
  m.joints[1] = {Vec3(0.0, 0.0, -0.10), UnitQuaternion::Identity(), Vec3::UnitY()};
  m.joints[2] = {Vec3(0.0, 0.0, -0.35), UnitQuaternion::Identity(), Vec3::UnitY()};
  m.joints[3] = {Vec3(0.10, 0.0, 0.0), UnitQuaternion::Identity(), Vec3::UnitX()};
  m.joints[4] = {Vec3(0.25, 0.0, 0.0), UnitQuaternion::Identity(), Vec3::UnitY()};
  m.joints[5] = {Vec3(0.0, 0.0, 0.0), UnitQuaternion::Identity(), Vec3::UnitX()};
  m.ee_offset.position = Vec3(0.15, 0.0, 0.0);
  m.pos_min = JointVector::Constant(-2.9);
  m.pos_max = JointVector::Constant(2.9);
  m.vel_min = JointVector::Constant(-0.1);
  m.vel_max = JointVector::Constant(0.1);
  return m;
}

namespace detail {

inline Eigen::Isometry3d joint_parent_frame(const Eigen::Isometry3d& parent,
                                            const JointSpec& j) {
  Eigen::Isometry3d t = parent;
  t.translate(j.origin);
  t.rotate(j.rotation);
  return t;
}

inline Pose to_pose(const Eigen::Isometry3d& t) {
  Pose p;
  p.position = t.translation();
  p.orientation = UnitQuaternion(t.linear());
  p.orientation.normalize();
  return p;
}

}  // namespace detail

/// EE pose in the arm base frame.
inline Pose forward_kinematics(const ArmModel& model, const JointVector& theta) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (int i = 0; i < 6; ++i) {
    const JointSpec& j = model.joints[static_cast<std::size_t>(i)];
    t = detail::joint_parent_frame(t, j);
    t.rotate(Eigen::AngleAxisd(theta[i], j.axis));
  }
  t.translate(model.ee_offset.position);
  t.rotate(model.ee_offset.orientation);
  return detail::to_pose(t);
}

/// Geometric Jacobian in the base frame; column i is
/// [z_i x (p_E - p_i); z_i].
inline Jacobian geometric_jacobian(const ArmModel& model,
                                   const JointVector& theta) {
  std::array<Vec3, 6> origins;
  std::array<Vec3, 6> axes;
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (int i = 0; i < 6; ++i) {
    const JointSpec& j = model.joints[static_cast<std::size_t>(i)];
    t = detail::joint_parent_frame(t, j);
    origins[static_cast<std::size_t>(i)] = t.translation();
    axes[static_cast<std::size_t>(i)] = t.linear() * j.axis;
    t.rotate(Eigen::AngleAxisd(theta[i], j.axis));
  }
  t.translate(model.ee_offset.position);
  const Vec3 p_e = t.translation();

  Jacobian jac;
  for (int i = 0; i < 6; ++i) {
    const Vec3& z = axes[static_cast<std::size_t>(i)];
    jac.block<3, 1>(0, i) = z.cross(p_e - origins[static_cast<std::size_t>(i)]);
    jac.block<3, 1>(3, i) = z;
  }
  return jac;
}

inline Jacobian3 linear_rows(const Jacobian& j) { return j.topRows<3>(); }
inline Jacobian3 angular_rows(const Jacobian& j) { return j.bottomRows<3>(); }

}  // namespace compsim
