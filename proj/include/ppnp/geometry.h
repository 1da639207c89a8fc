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

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ppnp {

// Pinhole intrinsics. cell_size and focal_mm are the physical pixel pitch and
// focal length in millimetres; they are only consumed by the planar error
// model.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double u0 = 0.0;
  double v0 = 0.0;
  std::optional<double> cell_size;
  std::optional<double> focal_mm;

  // The calibrated camera used throughout the synthetic experiments.
  static CameraIntrinsics Reference();

  Eigen::Matrix3d K() const;

  // Throws kInvalidArgument when fx/fy or the optional physical values are
  // not strictly positive.
  void Validate() const;
};

// Maps world coordinates to camera coordinates: x_c = rotation * x_w +
// translation. Translation is in millimetres.
struct RigidPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d Apply(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }

  RigidPose Inverse() const;
};

bool IsRotationMatrix(const Eigen::Matrix3d& rotation, double tolerance = 1e-9);

struct Correspondence {
  Eigen::Vector3d world = Eigen::Vector3d::Zero();
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
};

using CorrespondenceSet = std::vector<Correspondence>;

// Checks the solver-entry invariants: at least `min_points` items, finite
// coordinates and pairwise distinct world points.
void ValidateCorrespondences(const CorrespondenceSet& corr,
                             std::size_t min_points);

std::vector<Eigen::Vector3d> WorldPoints(const CorrespondenceSet& corr);

// Perspective projection to pixels. Throws kBehindCamera when the camera-frame
// depth is not positive.
Eigen::Vector2d Project(const CameraIntrinsics& intr, const RigidPose& pose,
                        const Eigen::Vector3d& world);

Eigen::Vector2d NormalizePixel(const CameraIntrinsics& intr,
                               const Eigen::Vector2d& pixel);

// Root-mean-square pixel distance between observations and the projections
// under `pose`. Points behind the camera make the result +inf.
double ReprojectionRms(const CorrespondenceSet& corr,
                       const CameraIntrinsics& intr, const RigidPose& pose);

Eigen::Matrix3d RotationX(double radians);
Eigen::Matrix3d RotationY(double radians);
Eigen::Matrix3d RotationZ(double radians);

double DegToRad(double degrees);
double RadToDeg(double radians);

// Z-X-Z Euler composition Rz(alpha) * Rx(beta) * Rz(theta), angles in
// degrees: rotate about Z, then about the new X, then about the new Z.
Eigen::Matrix3d EulerZxzToRotation(double alpha_deg, double beta_deg,
                                   double theta_deg);

struct EulerZxz {
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  double theta_deg = 0.0;
  // Set when beta is 0 or 180 degrees. alpha then carries the combined
  // in-plane angle and theta is 0.
  bool degenerate = false;
};

// Inverse of EulerZxzToRotation with beta in [0, 180] and alpha, theta in
// (-180, 180].
EulerZxz RotationToEulerZxz(const Eigen::Matrix3d& rotation);

// Nearest rotation in the Frobenius sense (orthogonal polar factor with the
// determinant forced to +1).
Eigen::Matrix3d NearestRotation(const Eigen::Matrix3d& m);

// Rigid transform (no scale) minimizing sum |camera_i - (R world_i + t)|^2.
// Throws kLengthMismatch / kInsufficientPoints / kRankDeficient.
RigidPose AbsoluteOrientation(std::span<const Eigen::Vector3d> world,
                              std::span<const Eigen::Vector3d> camera);

}  // namespace ppnp
