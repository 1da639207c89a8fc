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

#include <array>
#include <optional>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "ppnp/geometry.h"

namespace ppnp {

using Vector12d = Eigen::Matrix<double, 12, 1>;
using NullBasis = Eigen::Matrix<double, 12, Eigen::Dynamic>;
using ControlPoints = std::array<Eigen::Vector3d, 4>;
using PairWeights = std::array<double, 6>;
using AlphaMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4>;

// Control-point pairs (i < j) in the order used by every per-pair quantity.
inline constexpr std::array<std::pair<int, int>, 6> kControlPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

class ControlPointMode {
 public:
  // Centroid plus one point per principal axis, offset by that axis' standard
  // deviation.
  static ControlPointMode CentroidPca() { return ControlPointMode(); }
  static ControlPointMode Explicit(const ControlPoints& points) {
    ControlPointMode mode;
    mode.points_ = points;
    return mode;
  }

  bool is_explicit() const { return points_.has_value(); }
  const ControlPoints& points() const { return *points_; }

 private:
  std::optional<ControlPoints> points_;
};

struct ControlFrame {
  ControlPoints control_world;
  // Row i holds the barycentric coordinates of point i.
  AlphaMatrix alphas;
  // Right-singular vectors of M, ordered by ascending singular value.
  NullBasis basis;
  Vector12d singular_values = Vector12d::Zero();
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
};

enum class Initializer {
  kEpnpClosedForm,
  kWeakPerspective,
  kParaperspective,
  // Not an EPnP initializer; tags reports produced by the DLT baseline.
  kDirectLinear,
};

std::string_view InitializerName(Initializer init);

struct SolveReport {
  RigidPose pose;
  double reprojection_rms = 0.0;
  int gn_iterations = 0;
  Initializer initializer = Initializer::kEpnpClosedForm;
  bool weighted = false;
};

ControlPoints ChooseControlPoints(std::span<const Eigen::Vector3d> world,
                                  const ControlPointMode& mode);

// Signed volume of the tetrahedron spanned by the control points.
double TetrahedronVolume(const ControlPoints& control);

Eigen::Vector4d BarycentricCoords(const Eigen::Vector3d& world,
                                  const ControlPoints& control);

AlphaMatrix ComputeAlphas(std::span<const Eigen::Vector3d> world,
                          const ControlPoints& control);

// 2n x 12 projection constraint matrix. Row 2i constrains the x image
// coordinate of point i, row 2i+1 the y coordinate; columns are
// (C1x, C1y, C1z, ..., C4z) in the camera frame.
Eigen::MatrixXd BuildM(const CorrespondenceSet& corr, const AlphaMatrix& alphas,
                       const CameraIntrinsics& intr);

struct NullSpace {
  NullBasis basis;
  // All 12 singular values of M in ascending order (zero-padded when M has
  // fewer than 12 rows).
  Vector12d singular_values;
};

NullSpace NullSpaceBasis(const Eigen::MatrixXd& m, int count);

// Control points, barycentric coordinates, M and a 4-vector null basis.
ControlFrame BuildControlFrame(const CorrespondenceSet& corr,
                               const CameraIntrinsics& intr,
                               const ControlPointMode& mode);

Vector12d StackControlPoints(const ControlPoints& points);
ControlPoints UnstackControlPoints(const Vector12d& x);

// Camera-frame control points x = sum_k betas(k) * basis.col(k).
Vector12d CombineBasis(const Eigen::Vector4d& betas, const NullBasis& basis);

// Closed-form beta from the one- and two-vector linearised distance
// constraints. The candidate with the smaller reprojection error wins; its
// sign is chosen so reconstructed points have positive mean depth.
Eigen::Vector4d SolveBetasClosedForm(const ControlFrame& frame,
                                     const CorrespondenceSet& corr,
                                     const CameraIntrinsics& intr);

// sum_{i<j} w_ij (|Ci(beta) - Cj(beta)|^2 - |Ci^w - Cj^w|^2)^2
double DistanceObjective(const Eigen::Vector4d& betas, const NullBasis& basis,
                         const ControlPoints& control_world,
                         const std::optional<PairWeights>& weights);

struct GaussNewtonResult {
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  int iterations = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

inline constexpr int kMaxGaussNewtonIterations = 15;
inline constexpr double kGaussNewtonRelativeDecrease = 1e-12;
inline constexpr int kGaussNewtonMaxHalvings = 30;
// Iteration stops once the residual norm falls below this fraction of the
// target distance norm.
inline constexpr double kGaussNewtonObjectiveFloor = 1e-14;

// Minimises DistanceObjective over the four betas. Bases with fewer than
// four columns are padded with zero directions. Steps that would increase the
// objective are halved until it does not, so final_objective <=
// initial_objective.
GaussNewtonResult GaussNewtonRefine(const Eigen::Vector4d& betas0,
                                    const NullBasis& basis,
                                    const ControlPoints& control_world,
                                    const std::optional<PairWeights>& weights =
                                        std::nullopt);

// The distance objective is even in beta; picks the sign whose
// reconstructed points have positive mean depth.
Eigen::Vector4d OrientBetas(const Eigen::Vector4d& betas,
                            const ControlFrame& frame);

// Rebuilds camera-frame points from the betas and aligns them with the world
// points. Only pose and reprojection_rms are filled in.
SolveReport RecoverPose(const Eigen::Vector4d& betas, const ControlFrame& frame,
                        const CorrespondenceSet& corr,
                        const CameraIntrinsics& intr);

// Camera-frame points implied by `betas`, one per correspondence.
std::vector<Eigen::Vector3d> ReconstructCameraPoints(
    const Eigen::Vector4d& betas, const ControlFrame& frame);

}  // namespace ppnp
