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

#include "ppnp/baselines.h"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ppnp/error.h"
#include "ppnp/paraperspective.h"

namespace ppnp {

SolveReport SolveDlt(const CorrespondenceSet& corr,
                     const CameraIntrinsics& intr) {
  ValidateCorrespondences(corr, 6);
  intr.Validate();
  const auto n = static_cast<Eigen::Index>(corr.size());

  // Isotropic conditioning of the world points.
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& c : corr) centroid += c.world;
  centroid /= static_cast<double>(n);
  double mean_dist = 0.0;
  for (const auto& c : corr) mean_dist += (c.world - centroid).norm();
  mean_dist /= static_cast<double>(n);
  const double scale = std::sqrt(3.0) / mean_dist;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 12);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = corr[static_cast<std::size_t>(i)];
    const Eigen::Vector4d x = (scale * (c.world - centroid)).homogeneous();
    const Eigen::Vector2d q = NormalizePixel(intr, c.pixel);
    a.block<1, 4>(2 * i, 0) = x.transpose();
    a.block<1, 4>(2 * i, 8) = -q.x() * x.transpose();
    a.block<1, 4>(2 * i + 1, 4) = x.transpose();
    a.block<1, 4>(2 * i + 1, 8) = -q.y() * x.transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!s.allFinite() || s(10) <= 1e-12 * s(0)) {
    Fail(ErrorCode::kDegenerateConfiguration,
         "DLT system has a multi-dimensional null space");
  }
  const Eigen::Matrix<double, 12, 1> p = svd.matrixV().col(11);
  Eigen::Matrix<double, 3, 4> proj;
  proj.row(0) = p.segment<4>(0).transpose();
  proj.row(1) = p.segment<4>(4).transpose();
  proj.row(2) = p.segment<4>(8).transpose();

  Eigen::Matrix4d denorm = Eigen::Matrix4d::Identity();
  denorm.topLeftCorner<3, 3>() *= scale;
  denorm.topRightCorner<3, 1>() = -scale * centroid;
  proj = proj * denorm;

  Eigen::Matrix3d left = proj.leftCols<3>();
  const double row_scale = std::cbrt(left.row(0).norm() * left.row(1).norm() *
                                     left.row(2).norm());
  if (!(row_scale > 0.0) || !std::isfinite(row_scale)) {
    Fail(ErrorCode::kDegenerateConfiguration, "DLT produced a null rotation");
  }
  proj /= row_scale;
  double mean_depth = 0.0;
  for (const auto& c : corr) {
    mean_depth += proj.row(2).dot(c.world.homogeneous());
  }
  if (mean_depth < 0.0) proj = -proj;

  SolveReport report;
  report.initializer = Initializer::kDirectLinear;
  report.pose.rotation = NearestRotation(proj.leftCols<3>());

  // Translation re-solved for the projected rotation.
  const Eigen::Matrix3d& r = report.pose.rotation;
  Eigen::MatrixXd lhs(2 * n, 3);
  Eigen::VectorXd rhs(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = corr[static_cast<std::size_t>(i)];
    const Eigen::Vector2d q = NormalizePixel(intr, c.pixel);
    const Eigen::Vector3d rx = r * c.world;
    lhs.row(2 * i) << 1.0, 0.0, -q.x();
    rhs(2 * i) = q.x() * rx.z() - rx.x();
    lhs.row(2 * i + 1) << 0.0, 1.0, -q.y();
    rhs(2 * i + 1) = q.y() * rx.z() - rx.y();
  }
  report.pose.translation = lhs.colPivHouseholderQr().solve(rhs);
  report.reprojection_rms = ReprojectionRms(corr, intr, report.pose);
  return report;
}

RigidPose WeakPerspectivePose(const CorrespondenceSet& corr,
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

  const auto rows = static_cast<Eigen::Index>(corr.size() - 1);
  Eigen::MatrixXd a(rows, 3);
  Eigen::MatrixXd b(rows, 2);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (i == origin) continue;
    a.row(r) = (corr[i].world - p0).transpose();
    b.row(r) = (NormalizePixel(intr, corr[i].pixel) - q0).transpose();
    ++r;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  cod.setThreshold(1e-10);
  if (cod.rank() < 2) {
    Fail(ErrorCode::kRankDeficient,
         "weak-perspective fit: world points are collinear");
  }
  const Eigen::MatrixXd sol = cod.solve(b);
  const Eigen::Vector3d scaled_i = sol.col(0);
  const Eigen::Vector3d scaled_j = sol.col(1);
  const double ni = scaled_i.norm();
  const double nj = scaled_j.norm();
  if (!(ni > 0.0) || !(nj > 0.0)) {
    Fail(ErrorCode::kDegenerateConfiguration,
         "weak-perspective fit: vanishing image extent");
  }
  const double tz = 0.5 * (1.0 / ni + 1.0 / nj);
  const Eigen::Vector3d i = scaled_i / ni;
  const Eigen::Vector3d j = scaled_j / nj;
  Eigen::Matrix3d axes;
  axes.row(0) = i.transpose();
  axes.row(1) = j.transpose();
  axes.row(2) = i.cross(j).transpose();

  RigidPose pose;
  pose.rotation = NearestRotation(axes);
  pose.translation = Eigen::Vector3d(q0.x() * tz, q0.y() * tz, tz) -
                     pose.rotation * p0;
  return pose;
}

SolveReport SolveWeakPerspective(const CorrespondenceSet& corr,
                                 const CameraIntrinsics& intr,
                                 std::optional<std::size_t> origin_index) {
  SolveReport report;
  report.pose = WeakPerspectivePose(corr, intr, origin_index);
  report.reprojection_rms = ReprojectionRms(corr, intr, report.pose);
  report.initializer = Initializer::kWeakPerspective;
  return report;
}

}  // namespace ppnp
