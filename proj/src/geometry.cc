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

#include "ppnp/geometry.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "ppnp/error.h"

namespace ppnp {

CameraIntrinsics CameraIntrinsics::Reference() {
  CameraIntrinsics intr;
  intr.fx = 1301.473508;
  intr.fy = 1300.926193;
  intr.u0 = 653.0;
  intr.v0 = 508.0;
  return intr;
}

Eigen::Matrix3d CameraIntrinsics::K() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, u0, 0.0, fy, v0, 0.0, 0.0, 1.0;
  return k;
}

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "focal lengths fx, fy must be > 0");
  }
  if (!std::isfinite(u0) || !std::isfinite(v0)) {
    Fail(ErrorCode::kInvalidArgument, "principal point must be finite");
  }
  if (cell_size && !(*cell_size > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "cell size must be > 0");
  }
  if (focal_mm && !(*focal_mm > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "physical focal length must be > 0");
  }
}

RigidPose RigidPose::Inverse() const {
  RigidPose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

bool IsRotationMatrix(const Eigen::Matrix3d& rotation, double tolerance) {
  if (!rotation.allFinite()) return false;
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tolerance) {
    return false;
  }
  return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

void ValidateCorrespondences(const CorrespondenceSet& corr,
                             std::size_t min_points) {
  if (corr.size() < min_points) {
    std::ostringstream msg;
    msg << "insufficient points: got " << corr.size() << ", need at least "
        << min_points;
    Fail(ErrorCode::kInsufficientPoints, msg.str());
  }
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (!corr[i].world.allFinite() || !corr[i].pixel.allFinite()) {
      Fail(ErrorCode::kInvalidArgument,
           "correspondence " + std::to_string(i) + " is not finite");
    }
  }
  // O(n^2) but n is small for every caller.
  for (std::size_t i = 0; i < corr.size(); ++i) {
    for (std::size_t j = i + 1; j < corr.size(); ++j) {
      if (corr[i].world == corr[j].world) {
        Fail(ErrorCode::kInvalidArgument,
             "world points " + std::to_string(i) + " and " + std::to_string(j) +
                 " coincide");
      }
    }
  }
}

std::vector<Eigen::Vector3d> WorldPoints(const CorrespondenceSet& corr) {
  std::vector<Eigen::Vector3d> world;
  world.reserve(corr.size());
  for (const auto& c : corr) world.push_back(c.world);
  return world;
}

Eigen::Vector2d Project(const CameraIntrinsics& intr, const RigidPose& pose,
                        const Eigen::Vector3d& world) {
  const Eigen::Vector3d cam = pose.Apply(world);
  if (!(cam.z() > 0.0)) {
    std::ostringstream msg;
    msg << "point (" << world.transpose() << ") has non-positive depth "
        << cam.z();
    Fail(ErrorCode::kBehindCamera, msg.str());
  }
  return {intr.u0 + intr.fx * cam.x() / cam.z(),
          intr.v0 + intr.fy * cam.y() / cam.z()};
}

Eigen::Vector2d NormalizePixel(const CameraIntrinsics& intr,
                               const Eigen::Vector2d& pixel) {
  return {(pixel.x() - intr.u0) / intr.fx, (pixel.y() - intr.v0) / intr.fy};
}

double ReprojectionRms(const CorrespondenceSet& corr,
                       const CameraIntrinsics& intr, const RigidPose& pose) {
  if (corr.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : corr) {
    const Eigen::Vector3d cam = pose.Apply(c.world);
    if (!(cam.z() > 0.0)) return std::numeric_limits<double>::infinity();
    const Eigen::Vector2d proj(intr.u0 + intr.fx * cam.x() / cam.z(),
                               intr.v0 + intr.fy * cam.y() / cam.z());
    sum += (proj - c.pixel).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(corr.size()));
}

Eigen::Matrix3d RotationX(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c;
  return r;
}

Eigen::Matrix3d RotationY(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  Eigen::Matrix3d r;
  r << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
  return r;
}

Eigen::Matrix3d RotationZ(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  Eigen::Matrix3d r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

double DegToRad(double degrees) { return degrees * std::numbers::pi / 180.0; }
double RadToDeg(double radians) { return radians * 180.0 / std::numbers::pi; }

Eigen::Matrix3d EulerZxzToRotation(double alpha_deg, double beta_deg,
                                   double theta_deg) {
  const double ca = std::cos(DegToRad(alpha_deg));
  const double sa = std::sin(DegToRad(alpha_deg));
  const double cb = std::cos(DegToRad(beta_deg));
  const double sb = std::sin(DegToRad(beta_deg));
  const double ct = std::cos(DegToRad(theta_deg));
  const double st = std::sin(DegToRad(theta_deg));
  Eigen::Matrix3d r;
  r << ca * ct - sa * cb * st, -ca * st - sa * cb * ct, sa * sb,
      sa * ct + ca * cb * st, -sa * st + ca * cb * ct, -ca * sb,
      sb * st, sb * ct, cb;
  return r;
}

EulerZxz RotationToEulerZxz(const Eigen::Matrix3d& r) {
  constexpr double kGimbalTolerance = 1e-10;
  EulerZxz e;
  const double sb = std::hypot(r(2, 0), r(2, 1));
  e.beta_deg = RadToDeg(std::atan2(sb, r(2, 2)));
  if (sb > kGimbalTolerance) {
    e.alpha_deg = RadToDeg(std::atan2(r(0, 2), -r(1, 2)));
    e.theta_deg = RadToDeg(std::atan2(r(2, 0), r(2, 1)));
    return e;
  }
  e.degenerate = true;
  e.theta_deg = 0.0;
  if (r(2, 2) > 0.0) {
    // Rz(alpha + theta).
    e.beta_deg = 0.0;
    e.alpha_deg = RadToDeg(std::atan2(r(1, 0), r(0, 0)));
  } else {
    // First row is (cos(alpha - theta), sin(alpha - theta), 0).
    e.beta_deg = 180.0;
    e.alpha_deg = RadToDeg(std::atan2(r(0, 1), r(0, 0)));
  }
  // Normalise -180 to 180 so the range is (-180, 180].
  if (e.alpha_deg == -180.0) e.alpha_deg = 180.0;
  return e;
}

Eigen::Matrix3d NearestRotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0
                ? -1.0
                : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

RigidPose AbsoluteOrientation(std::span<const Eigen::Vector3d> world,
                              std::span<const Eigen::Vector3d> camera) {
  if (world.size() != camera.size()) {
    Fail(ErrorCode::kLengthMismatch,
         "absolute orientation: point sequences differ in length");
  }
  if (world.size() < 3) {
    Fail(ErrorCode::kInsufficientPoints,
         "absolute orientation needs at least 3 point pairs");
  }
  const double n = static_cast<double>(world.size());
  Eigen::Vector3d world_mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d camera_mean = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < world.size(); ++i) {
    world_mean += world[i];
    camera_mean += camera[i];
  }
  world_mean /= n;
  camera_mean /= n;

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d world_scatter = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < world.size(); ++i) {
    const Eigen::Vector3d w = world[i] - world_mean;
    cross += (camera[i] - camera_mean) * w.transpose();
    world_scatter += w * w.transpose();
  }

  // Collinear world points leave rotation about the line undetermined.
  const Eigen::Vector3d spread =
      Eigen::JacobiSVD<Eigen::Matrix3d>(world_scatter).singularValues();
  if (!(spread(0) > 0.0) || spread(1) <= 1e-20 * spread(0)) {
    Fail(ErrorCode::kRankDeficient,
         "absolute orientation: world points are collinear or coincident");
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  if (!cross.allFinite() || !(s(0) > 0.0) || s(1) <= 1e-12 * s(0)) {
    Fail(ErrorCode::kRankDeficient,
         "absolute orientation: cross-covariance is rank deficient");
  }
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  RigidPose pose;
  pose.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  pose.translation = camera_mean - pose.rotation * world_mean;
  return pose;
}

}  // namespace ppnp
