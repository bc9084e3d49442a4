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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace compsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Joint positions (rad) or joint velocities (rad/s) of the 6-DoF arm.
using JointVector = Eigen::Matrix<double, 6, 1>;

/// Orientation as a unit quaternion {eta, eps}. Eigen stores (x, y, z, w);
/// w() is the scalar part eta and vec() the vector part eps.
using UnitQuaternion = Eigen::Quaterniond;

/// Full 6x6 geometric Jacobian, rows 0-2 linear and rows 3-5 angular.
using Jacobian = Eigen::Matrix<double, 6, 6>;
using Jacobian3 = Eigen::Matrix<double, 3, 6>;
using Jacobian5 = Eigen::Matrix<double, 5, 6>;

struct Pose {
  Vec3 position = Vec3::Zero();
  UnitQuaternion orientation = UnitQuaternion::Identity();
};

/// Generalized velocity [v; omega].
struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();
};

/// Malformed user input: bad files, schema violations, unmet preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: near-singular inversion, non-finite planner output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace compsim
