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

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "compsim/types.hpp"

// Pseudo-inverses of wide task Jacobians.
//
//   pinv         J^T (J J^T)^-1, full row rank required
//   damped_pinv  sum_i sigma_i / (sigma_i^2 + lambda^2) v_i u_i^T
//   svf_pinv     sum_i 1 / f(sigma_i) v_i u_i^T, with
//                f(s) = (s^3 + u s^2 + 2 s + 2 s0) / (s^2 + u s + 2)
//
// The SVF filter lifts every singular value to at least s0, so the gain of
// svf_pinv never exceeds 1 / s0 even at an exact singularity.

namespace compsim {

/// Shape parameters of the singular value filter.
struct SvfParams {
  double sigma0 = 0.01;   // minimum imposed singular value
  double upsilon = 10.0;  // shape factor
};

template <typename Derived>
using PinvOf = Eigen::Matrix<double, Derived::ColsAtCompileTime,
                             Derived::RowsAtCompileTime>;

template <typename Derived>
using PlainOf = Eigen::Matrix<double, Derived::RowsAtCompileTime,
                              Derived::ColsAtCompileTime>;

inline void validate(const SvfParams& p) {
  if (!(p.sigma0 > 0.0) || !std::isfinite(p.sigma0))
    throw InputError("svf: sigma0 must be > 0");
  if (!(p.upsilon >= 0.0) || !std::isfinite(p.upsilon))
    throw InputError("svf: upsilon must be >= 0");
}

/// Moore-Penrose inverse through the normal equations. Throws
/// NumericalError when cond(J J^T) exceeds `max_condition`.
template <typename Derived>
PinvOf<Derived> pinv(const Eigen::MatrixBase<Derived>& j,
                     double max_condition = 1e12) {
  using Gram = Eigen::Matrix<double, Derived::RowsAtCompileTime,
                             Derived::RowsAtCompileTime>;
  const Gram gram = j * j.transpose();
  Eigen::SelfAdjointEigenSolver<Gram> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > max_condition)
    throw NumericalError("pinv: near-singular J J^T (condition estimate " +
                         std::to_string(lo > 0.0 ? hi / lo : INFINITY) + ")");
  const Gram inv = gram.llt().solve(Gram::Identity(gram.rows(), gram.cols()));
  return j.transpose() * inv;
}

/// Value of the singular value filter at `sigma`.
inline double svf_filter(double sigma, const SvfParams& p) {
  const double s2 = sigma * sigma;
  return (s2 * sigma + p.upsilon * s2 + 2.0 * sigma + 2.0 * p.sigma0) /
         (s2 + p.upsilon * sigma + 2.0);
}

namespace detail {

// Sums weight(sigma_i) * v_i u_i^T (transposed = false) or
// weight(sigma_i) * u_i v_i^T (transposed = true) over all min(m, n)
// singular triplets, zero singular values included.
template <typename Derived, typename Weight>
Eigen::MatrixXd svd_sum(const Eigen::MatrixBase<Derived>& j, Weight weight,
                        bool transposed) {
  const Eigen::MatrixXd a = j;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& u = svd.matrixU();
  const auto& v = svd.matrixV();
  const auto& s = svd.singularValues();
  Eigen::MatrixXd out = transposed ? Eigen::MatrixXd::Zero(a.rows(), a.cols())
                                   : Eigen::MatrixXd::Zero(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double w = weight(s[i]);
    if (w == 0.0) continue;
    if (transposed)
      out.noalias() += w * u.col(i) * v.col(i).transpose();
    else
      out.noalias() += w * v.col(i) * u.col(i).transpose();
  }
  return out;
}

}  // namespace detail

/// Singular values of j in decreasing order, min(m, n) of them.
template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& j) {
  const Eigen::MatrixXd a = j;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

template <typename Derived>
double min_singular_value(const Eigen::MatrixBase<Derived>& j) {
  return singular_values(j).minCoeff();
}

/// Damped least-squares inverse. With lambda = 0 zero singular values are
/// dropped, which makes it the SVD Moore-Penrose inverse.
template <typename Derived>
PinvOf<Derived> damped_pinv(const Eigen::MatrixBase<Derived>& j, double lambda) {
  if (!(lambda >= 0.0)) throw InputError("damped_pinv: lambda must be >= 0");
  const double l2 = lambda * lambda;
  return detail::svd_sum(
      j,
      [l2](double s) {
        const double d = s * s + l2;
        return d > 0.0 ? s / d : 0.0;
      },
      false);
}

/// Filtered Jacobian J_F = sum_i f(sigma_i) u_i v_i^T.
template <typename Derived>
PlainOf<Derived> svf_filtered(const Eigen::MatrixBase<Derived>& j,
                              const SvfParams& p) {
  return detail::svd_sum(j, [&p](double s) { return svf_filter(s, p); }, true);
}

/// Pseudo-inverse of the filtered Jacobian.
template <typename Derived>
PinvOf<Derived> svf_pinv(const Eigen::MatrixBase<Derived>& j, const SvfParams& p) {
  return detail::svd_sum(j, [&p](double s) { return 1.0 / svf_filter(s, p); },
                         false);
}

}  // namespace compsim
