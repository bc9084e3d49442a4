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
#include <string_view>

#include "compsim/kinematics.hpp"
#include "compsim/planners.hpp"
#include "compsim/types.hpp"

namespace compsim {

struct JointLimits {
  JointVector pos_min = JointVector::Constant(-M_PI);
  JointVector pos_max = JointVector::Constant(M_PI);
  JointVector vel_limit = JointVector::Constant(0.1);  // symmetric, > 0
};

/// How the activation mask treats a joint sitting on a position limit.
///   Literal: frozen in both directions while on or past the limit.
///   DirectionAware: frozen only if the step would push it further out.
enum class ActivationMode { Literal, DirectionAware };

inline std::string_view to_string(ActivationMode m) {
  return m == ActivationMode::Literal ? "literal" : "direction_aware";
}

inline ActivationMode parse_activation_mode(std::string_view s) {
  if (s == "literal") return ActivationMode::Literal;
  if (s == "direction_aware") return ActivationMode::DirectionAware;
  throw InputError("unknown activation mode '" + std::string(s) +
                   "' (expected literal or direction_aware)");
}

/// Symmetric limits from a model: the velocity bound per joint is the
/// smaller magnitude of its min/max.
inline JointLimits limits_from(const ArmModel& m) {
  return {m.pos_min, m.pos_max, m.vel_max.cwiseMin(-m.vel_min)};
}

inline JointVector clamp_velocity(const JointVector& theta_dot,
                                  const JointLimits& limits) {
  return theta_dot.cwiseMax(-limits.vel_limit).cwiseMin(limits.vel_limit);
}

/// Sets cmd.saturated if any joint command exceeds its velocity limit.
inline void mark_saturation(PlannerCommand& cmd, const JointLimits& limits) {
  cmd.saturated = (cmd.theta_dot.cwiseAbs().array() > limits.vel_limit.array()).any();
}

using Activation = Eigen::Array<bool, 6, 1>;

/// H_i = 1 iff pos_min_i < theta_i < pos_max_i.
inline Activation activation_matrix(const JointVector& theta,
                                    const JointLimits& limits) {
  return (theta.array() > limits.pos_min.array()) &&
         (theta.array() < limits.pos_max.array());
}

inline Activation activation_matrix(const JointVector& theta,
                                    const JointVector& step,
                                    const JointLimits& limits,
                                    ActivationMode mode) {
  if (mode == ActivationMode::Literal) return activation_matrix(theta, limits);
  Activation h;
  for (int i = 0; i < 6; ++i) {
    const bool out_high = theta[i] >= limits.pos_max[i] && step[i] > 0.0;
    const bool out_low = theta[i] <= limits.pos_min[i] && step[i] < 0.0;
    h[i] = !(out_high || out_low);
  }
  return h;
}

/// theta + H * clamp(theta_dot) * dt, then clipped to the position range
/// so a single step cannot cross a limit.
inline JointVector integrate_step(const JointVector& theta,
                                  const JointVector& theta_dot, double dt,
                                  const JointLimits& limits,
                                  ActivationMode mode = ActivationMode::Literal) {
  if (!(dt > 0.0)) throw InputError("integrate_step: dt must be > 0");
  const JointVector step = clamp_velocity(theta_dot, limits) * dt;
  const Activation h = activation_matrix(theta, step, limits, mode);
  JointVector next = theta + h.cast<double>().matrix().cwiseProduct(step);
  return next.cwiseMax(limits.pos_min).cwiseMin(limits.pos_max);
}

}  // namespace compsim
