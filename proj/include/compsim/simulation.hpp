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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "compsim/frame_pipeline.hpp"
#include "compsim/kinematics.hpp"
#include "compsim/limits.hpp"
#include "compsim/motion.hpp"
#include "compsim/planners.hpp"
#include "compsim/types.hpp"

// Closed compensation loop. Each tick:
//   torso sample -> home-frame errors -> planner step -> clamp + integrate
// and the EE world position is logged as ground truth.

namespace compsim {

/// Working configuration the simulator starts from. The tool point sits
/// front-right below the mount and the wrist is bent well away from the
/// aligned-wrist singularity at theta = 0. Chosen to maximize the EE speed
/// that both planners can command in any direction under 0.1 rad/s caps.
inline JointVector default_initial_theta() {
  JointVector q;
  q << -0.18, 0.0, -0.46, -1.06, 1.2, -0.73;
  return q;
}

/// Default torso-to-base offset: right shoulder mount.
inline Vec3 default_mount_offset() { return {0.0, -0.18, 0.25}; }

struct SimConfig {
  Method method = Method::Rjm;
  double rate = 60.0;  // Hz
  ArmModel model = default_arm_model();
  Gains gains;
  SvfParams svf;
  JointVector initial_theta = default_initial_theta();
  Vec3 mount_offset = default_mount_offset();  // torso -> arm base, torso frame
  Axis released = Axis::X;
  ActivationMode activation = ActivationMode::Literal;
  Inversion inversion = Inversion::Svf;
  bool compensate = true;  // false: joints held, the arm rides the torso
  double quiescence_speed = kDefaultQuiescenceSpeed;  // m/s
  double p1_angular_speed = 0.05;  // rad/s, torso rotation flag threshold
  double noise_stddev = 0.0;       // m, measured torso position noise
  std::uint64_t noise_seed = 0;
  std::string scenario = "custom";
};

inline void validate(const SimConfig& c) {
  validate(c.model);
  validate(c.gains);
  validate(c.svf);
  if (!(c.rate > 0.0)) throw InputError("simulation: rate must be > 0");
  if (!c.initial_theta.allFinite() ||
      !(c.initial_theta.array() >= c.model.pos_min.array()).all() ||
      !(c.initial_theta.array() <= c.model.pos_max.array()).all())
    throw InputError("simulation: initial theta must lie within joint limits");
  if (!(c.noise_stddev >= 0.0)) throw InputError("simulation: noise must be >= 0");
}

struct LogEntry {
  double t = 0.0;
  HumanSample human;
  Vec3 v_base = Vec3::Zero();          // home frame
  Vec3 delta_p = Vec3::Zero();         // EE position correction, home frame
  QuatError orientation_error;
  JointVector theta = JointVector::Zero();
  JointVector command = JointVector::Zero();  // planner output, unclamped
  JointVector theta_dot = JointVector::Zero();  // after velocity clamping
  Pose ee_base;                        // EE pose in the arm base frame
  Vec3 ee_world = Vec3::Zero();        // ground-truth EE position
  double sigma_min = 0.0;
  bool saturated = false;              // command exceeded a velocity limit
  bool p1_violation = false;
};

struct TraceLog {
  Method method = Method::Rjm;
  std::string scenario = "custom";
  double rate = 60.0;
  std::vector<LogEntry> entries;
};

/// Ground-truth EE position: p_H + R_H (p_HB + p_E^B).
inline Vec3 ee_world_position(const HumanSample& torso, const Vec3& mount_offset,
                              const Vec3& ee_in_base) {
  return torso.position +
         torso.orientation.normalized().toRotationMatrix() * (mount_offset + ee_in_base);
}

/// Torso angular speed between two samples, rad/s.
inline double angular_speed(const HumanSample& prev, const HumanSample& next) {
  const double dt = next.t - prev.t;
  if (!(dt > 0.0)) return 0.0;
  const UnitQuaternion d = quat_multiply(next.orientation, prev.orientation.conjugate());
  const double angle = 2.0 * std::atan2(d.vec().norm(), std::abs(d.w()));
  return angle / dt;
}

/// Runs the loop over `trace` (resampled to config.rate when needed).
/// Throws InputError if the home frame cannot be captured and
/// NumericalError on a non-finite or failed planner step.
inline TraceLog run_compensation(const SimConfig& config,
                                 const std::vector<HumanSample>& trace) {
  validate(config);
  check_monotone(trace);
  const std::vector<HumanSample> truth =
      on_uniform_grid(trace, config.rate) ? trace : resample_trace(trace, config.rate);
  const std::vector<HumanSample> measured =
      add_position_noise(truth, config.noise_stddev, config.noise_seed);

  const JointLimits limits = limits_from(config.model);
  const double dt = 1.0 / config.rate;
  const HomeFrame home = capture_home(measured.front(), config.model,
                                      config.initial_theta, config.quiescence_speed);

  TraceLog log;
  log.method = config.method;
  log.scenario = config.scenario;
  log.rate = config.rate;
  log.entries.reserve(truth.size());

  JointVector theta = config.initial_theta;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const HumanSample& sample = measured[k];
    LogEntry e;
    e.t = truth[k].t;
    e.human = truth[k];
    e.theta = theta;
    e.ee_base = forward_kinematics(config.model, theta);
    e.ee_world = ee_world_position(truth[k], config.mount_offset, e.ee_base.position);
    e.p1_violation =
        k > 0 && angular_speed(truth[k - 1], truth[k]) > config.p1_angular_speed;

    e.v_base = base_velocity_local(home, sample);
    e.delta_p = ee_position_variation(home, sample, e.ee_base);
    e.orientation_error = ee_orientation_error(home, e.ee_base.orientation);

    const Jacobian jac = geometric_jacobian(config.model, theta);
    PlannerCommand cmd;
    try {
      if (config.method == Method::Nbm) {
        cmd = nbm_step(linear_rows(jac), angular_rows(jac), e.v_base,
                       e.orientation_error.delta_eps, config.gains, config.svf,
                       config.inversion);
      } else {
        cmd = rjm_step(reconstruct_jacobian(linear_rows(jac), angular_rows(jac),
                                            config.released),
                       e.v_base, e.delta_p,
                       kept_components(e.orientation_error.delta_eps, config.released),
                       config.gains, config.svf, config.released, config.inversion);
      }
    } catch (const NumericalError& err) {
      throw NumericalError("tick " + std::to_string(k) + " (t = " +
                           std::to_string(e.t) + " s): " + err.what());
    }
    if (!config.compensate) cmd.theta_dot.setZero();
    if (!cmd.theta_dot.allFinite())
      throw NumericalError("tick " + std::to_string(k) + " (t = " +
                           std::to_string(e.t) + " s): non-finite planner output");

    mark_saturation(cmd, limits);
    e.command = cmd.theta_dot;
    e.theta_dot = clamp_velocity(cmd.theta_dot, limits);
    e.sigma_min = cmd.min_singular_value;
    e.saturated = cmd.saturated;
    log.entries.push_back(e);

    theta = integrate_step(theta, cmd.theta_dot, dt, limits, config.activation);
  }
  return log;
}

}  // namespace compsim
