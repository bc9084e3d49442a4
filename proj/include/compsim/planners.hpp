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
#include <string>
#include <string_view>

#include "compsim/pseudo_inverse.hpp"
#include "compsim/types.hpp"

// Two-level task-priority planners that keep the end-effector still while
// the base translates. Priority 1 is EE position, priority 2 EE orientation.
//
// Nullspace-based (NBM):
//   thetadot = Jv#(-v_B) + N xi0,   N = I - Jv# Jv,   xi0 = Jw# K_O deps
//
// Reconstructed Jacobian (RJM): drop one angular row of J and solve the
// remaining 5x6 system in one shot with closed-loop feedback,
//   thetadot = J_MR# [-v_B + K_P dp_E; K_O,a deps_a; K_O,b deps_b]
//
// Every # is an SVF pseudo-inverse unless Inversion::Plain is requested.

namespace compsim {

enum class Method { Nbm, Rjm };
enum class Axis { X = 0, Y = 1, Z = 2 };

/// Plain selects the unfiltered Moore-Penrose inverse. It exists to show
/// what SVF protects against and is not meant for normal operation.
enum class Inversion { Svf, Plain };

struct Gains {
  Vec3 position = Vec3::Ones();     // K_P, 1/s
  Vec3 orientation = Vec3::Ones();  // K_O, 1/s
};

struct PlannerCommand {
  JointVector theta_dot = JointVector::Zero();
  double min_singular_value = 0.0;  // of the primary-task Jacobian
  Method method = Method::Rjm;
  bool saturated = false;  // some joint exceeds its velocity limit; see mark_saturation
};

inline std::string_view to_string(Method m) {
  return m == Method::Nbm ? "nbm" : "rjm";
}

inline Method parse_method(std::string_view s) {
  if (s == "nbm" || s == "NBM") return Method::Nbm;
  if (s == "rjm" || s == "RJM") return Method::Rjm;
  throw InputError("unknown method '" + std::string(s) + "' (expected nbm or rjm)");
}

inline std::string_view to_string(Axis a) {
  return a == Axis::X ? "x" : a == Axis::Y ? "y" : "z";
}

inline Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw InputError("unknown axis '" + std::string(s) + "' (expected x, y or z)");
}

inline void validate(const Gains& g) {
  if (!(g.position.array() > 0.0).all() || !(g.orientation.array() > 0.0).all())
    throw InputError("gains: all entries must be > 0");
}

/// The two angular indices kept when `released` is dropped, in order.
inline std::array<int, 2> kept_axes(Axis released) {
  switch (released) {
    case Axis::X: return {1, 2};
    case Axis::Y: return {0, 2};
    case Axis::Z: return {0, 1};
  }
  return {1, 2};
}

namespace detail {

template <typename Derived>
PinvOf<Derived> invert(const Eigen::MatrixBase<Derived>& j, const SvfParams& p,
                       Inversion inv) {
  return inv == Inversion::Svf ? svf_pinv(j, p) : pinv(j);
}

}  // namespace detail

/// N = I - Jv# Jv.
inline Mat6 nullspace_projector(const Jacobian3& jv,
                                const Eigen::Matrix<double, 6, 3>& jv_pinv) {
  return Mat6::Identity() - jv_pinv * jv;
}

inline PlannerCommand nbm_step(const Jacobian3& jv, const Jacobian3& jw,
                               const Vec3& v_base, const Vec3& delta_eps,
                               const Gains& gains, const SvfParams& svf,
                               Inversion inv = Inversion::Svf) {
  const Eigen::Matrix<double, 6, 3> jv_pinv = detail::invert(jv, svf, inv);
  const Eigen::Matrix<double, 6, 3> jw_pinv = detail::invert(jw, svf, inv);
  const JointVector xi0 = jw_pinv * gains.orientation.cwiseProduct(delta_eps);
  PlannerCommand cmd;
  cmd.method = Method::Nbm;
  cmd.theta_dot = jv_pinv * (-v_base) + nullspace_projector(jv, jv_pinv) * xi0;
  cmd.min_singular_value = min_singular_value(jv);
  return cmd;
}

/// Stacks [Jv; Jw_a; Jw_b] where a, b are the angular rows other than
/// `released`.
inline Jacobian5 reconstruct_jacobian(const Jacobian3& jv, const Jacobian3& jw,
                                      Axis released = Axis::X) {
  const auto kept = kept_axes(released);
  Jacobian5 j;
  j.topRows<3>() = jv;
  j.row(3) = jw.row(kept[0]);
  j.row(4) = jw.row(kept[1]);
  return j;
}

/// Task vector [-v_B + K_P dp_E; K_O,a deps_a; K_O,b deps_b].
inline Eigen::Matrix<double, 5, 1> rjm_target(const Vec3& v_base,
                                              const Vec3& delta_p_e,
                                              const Eigen::Vector2d& delta_eps_kept,
                                              const Gains& gains,
                                              Axis released = Axis::X) {
  const auto kept = kept_axes(released);
  Eigen::Matrix<double, 5, 1> target;
  target.head<3>() = -v_base + gains.position.cwiseProduct(delta_p_e);
  target[3] = gains.orientation[kept[0]] * delta_eps_kept[0];
  target[4] = gains.orientation[kept[1]] * delta_eps_kept[1];
  return target;
}

inline PlannerCommand rjm_step(const Jacobian5& j_mr, const Vec3& v_base,
                               const Vec3& delta_p_e,
                               const Eigen::Vector2d& delta_eps_kept,
                               const Gains& gains, const SvfParams& svf,
                               Axis released = Axis::X,
                               Inversion inv = Inversion::Svf) {
  PlannerCommand cmd;
  cmd.method = Method::Rjm;
  cmd.theta_dot = detail::invert(j_mr, svf, inv) *
                  rjm_target(v_base, delta_p_e, delta_eps_kept, gains, released);
  cmd.min_singular_value = min_singular_value(j_mr);
  return cmd;
}

/// Picks the two kept components of a 3-vector.
inline Eigen::Vector2d kept_components(const Vec3& v, Axis released = Axis::X) {
  const auto kept = kept_axes(released);
  return {v[kept[0]], v[kept[1]]};
}

}  // namespace compsim
