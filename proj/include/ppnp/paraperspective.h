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

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "ppnp/epnp.h"
#include "ppnp/geometry.h"

namespace ppnp {

// Linear paraperspective pose about a reference point P0 of the target.
//
// With (x0, y0) the normalised image of P0 and t_z its depth, every point
// satisfies x_i - x0 = Ip . (P_i - P0) and y_i - y0 = Jp . (P_i - P0), where
// Ip = (i - x0 k) / t_z and Jp = (j - y0 k) / t_z for camera axes i, j, k.
struct ParaperspectiveFit {
  Eigen::Vector3d ip = Eigen::Vector3d::Zero();
  Eigen::Vector3d jp = Eigen::Vector3d::Zero();
  // Normalised image coordinates of the reference point.
  Eigen::Vector2d origin_norm = Eigen::Vector2d::Zero();
  // Depth of the reference point.
  double tz = 0.0;
  std::size_t origin_index = 0;
  // Rows i, j, k as recovered, before projection onto SO(3).
  Eigen::Matrix3d raw_axes = Eigen::Matrix3d::Identity();
  // World-to-camera pose (translation refers to the world origin).
  RigidPose pose;
};

// The correspondence whose world point is the origin, else the one closest
// to the world centroid (lowest index on ties).
std::size_t DefaultOriginIndex(const CorrespondenceSet& corr);

ParaperspectiveFit FitParaperspective(
    const CorrespondenceSet& corr, const CameraIntrinsics& intr,
    std::optional<std::size_t> origin_index = std::nullopt);

// Orthogonal projection of the camera-frame control points under `pose` onto
// the null basis of `frame`.
Eigen::Vector4d InitBetas(const RigidPose& pose, const ControlFrame& frame);

inline Eigen::Vector4d InitBetas(const ParaperspectiveFit& fit,
                                 const ControlFrame& frame) {
  return InitBetas(fit.pose, frame);
}

Eigen::Matrix3d Skew(const Eigen::Vector3d& v);

}  // namespace ppnp
