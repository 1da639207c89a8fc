// Copyright 2026 The ppnp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppnp/paraperspective.h"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ppnp/error.h"

namespace ppnp {

Eigen::Matrix3d Skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

std::size_t DefaultOriginIndex(const CorrespondenceSet& corr) {
  if (corr.empty()) {
    Fail(ErrorCode::kInsufficientPoints, "no correspondences");
  }
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (corr[i].world.isZero(0.0)) return i;
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& c : corr) centroid += c.world;
  centroid /= static_cast<double>(corr.size());
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const double d = (corr[i].world - centroid).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

ParaperspectiveFit FitParaperspective(const CorrespondenceSet& corr,
                                      const CameraIntrinsics& intr,
                                      std::optional<std::size_t> origin_index) {
  ValidateCorrespondences(corr, 4);
  intr.Validate();
  const std::size_t origin = origin_index.value_or(DefaultOriginIndex(corr));
  if (origin >= corr.size()) {
    Fail(ErrorCode::kInvalidArgument, "origin index out of range");
  }

  const Eigen::Vector3d p0 = corr[origin].world;
  const Eigen::Vector2d q0 = NormalizePixel(intr, corr[origin].pixel);
  const double x0 = q0.x();
  const double y0 = q0.y();

  const auto rows = static_cast<Eigen::Index>(corr.size() - 1);
  Eigen::MatrixXd a(rows, 3);
  Eigen::MatrixXd b(rows, 2);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (i == origin) continue;
    a.row(r) = (corr[i].world - p0).transpose();
    const Eigen::Vector2d q = NormalizePixel(intr, corr[i].pixel);
    b(r, 0) = q.x() - x0;
    b(r, 1) = q.y() - y0;
    ++r;
  }

  // Minimum-norm least squares so that planar targets (rank 2) still get a
  // solution; rank 1 means the points are collinear.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  cod.setThreshold(1e-10);
  if (cod.rank() < 2) {
    Fail(ErrorCode::kRankDeficient,
         "paraperspective fit: world points are collinear");
  }
  const Eigen::MatrixXd sol = cod.solve(b);

  ParaperspectiveFit fit;
  fit.ip = sol.col(0);
  fit.jp = sol.col(1);
  fit.origin_norm = q0;
  fit.origin_index = origin;

  const double ip_norm = fit.ip.norm();
  const double jp_norm = fit.jp.norm();
  if (!(ip_norm > 0.0) || !(jp_norm > 0.0) || !std::isfinite(ip_norm) ||
      !std::isfinite(jp_norm)) {
    Fail(ErrorCode::kDegenerateConfiguration,
         "paraperspective fit: vanishing image extent");
  }
  // Each of |Ip|, |Jp| gives a depth estimate; average the two.
  const double tz = 0.5 * (std::sqrt(1.0 + x0 * x0) / ip_norm +
                           std::sqrt(1.0 + y0 * y0) / jp_norm);
  fit.tz = tz;

  // k = i x j with i = tz Ip + x0 k and j = tz Jp + y0 k is linear in k.
  const Eigen::Matrix3d system = Eigen::Matrix3d::Identity() -
                                 tz * y0 * Skew(fit.ip) +
                                 tz * x0 * Skew(fit.jp);
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(system);
  if (!lu.isInvertible() ||
      std::abs(system.determinant()) <= 1e-12 * system.norm()) {
    Fail(ErrorCode::kDegenerateConfiguration,
         "paraperspective fit: singular system for the optical axis");
  }
  const Eigen::Vector3d k = lu.solve(tz * tz * fit.ip.cross(fit.jp));
  const Eigen::Vector3d i = tz * fit.ip + x0 * k;
  const Eigen::Vector3d j = tz * fit.jp + y0 * k;

  fit.raw_axes.row(0) = i.transpose();
  fit.raw_axes.row(1) = j.transpose();
  fit.raw_axes.row(2) = k.transpose();
  if (!fit.raw_axes.allFinite()) {
    Fail(ErrorCode::kNumericalFailure, "paraperspective fit: non-finite axes");
  }

  fit.pose.rotation = NearestRotation(fit.raw_axes);
  const Eigen::Vector3d t0(x0 * tz, y0 * tz, tz);
  fit.pose.translation = t0 - fit.pose.rotation * p0;
  return fit;
}

Eigen::Vector4d InitBetas(const RigidPose& pose, const ControlFrame& frame) {
  ControlPoints cam;
  for (int j = 0; j < 4; ++j) cam[j] = pose.Apply(frame.control_world[j]);
  const Vector12d x0 = StackControlPoints(cam);
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(4, frame.basis.cols());
       ++k) {
    betas(k) = frame.basis.col(k).dot(x0);
  }
  return betas;
}

}  // namespace ppnp
