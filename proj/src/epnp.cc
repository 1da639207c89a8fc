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

#include "ppnp/epnp.h"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ppnp/error.h"

namespace ppnp {
namespace {

// Differences of one basis vector over the six control-point pairs.
std::array<Eigen::Vector3d, 6> PairDifferences(const Vector12d& v) {
  std::array<Eigen::Vector3d, 6> d;
  for (std::size_t p = 0; p < kControlPairs.size(); ++p) {
    const auto [i, j] = kControlPairs[p];
    d[p] = v.segment<3>(3 * i) - v.segment<3>(3 * j);
  }
  return d;
}

std::array<double, 6> WorldPairDistancesSq(const ControlPoints& control) {
  std::array<double, 6> rho;
  for (std::size_t p = 0; p < kControlPairs.size(); ++p) {
    const auto [i, j] = kControlPairs[p];
    rho[p] = (control[i] - control[j]).squaredNorm();
  }
  return rho;
}

Eigen::Matrix<double, 12, 4> PadBasis(const NullBasis& basis) {
  if (basis.cols() > 4) {
    Fail(ErrorCode::kInvalidArgument, "null basis has more than 4 vectors");
  }
  Eigen::Matrix<double, 12, 4> padded = Eigen::Matrix<double, 12, 4>::Zero();
  padded.leftCols(basis.cols()) = basis;
  return padded;
}

double MeanDepth(const Vector12d& x, const AlphaMatrix& alphas,
                 double* rms_depth) {
  const Eigen::Vector4d z(x(2), x(5), x(8), x(11));
  const Eigen::VectorXd depths = alphas * z;
  *rms_depth = std::sqrt(depths.squaredNorm() /
                         static_cast<double>(std::max<Eigen::Index>(1, depths.size())));
  return depths.mean();
}

}  // namespace

std::string_view InitializerName(Initializer init) {
  switch (init) {
    case Initializer::kEpnpClosedForm:
      return "epnp_closed_form";
    case Initializer::kWeakPerspective:
      return "weak_perspective";
    case Initializer::kParaperspective:
      return "paraperspective";
    case Initializer::kDirectLinear:
      return "direct_linear";
  }
  return "unknown";
}

double TetrahedronVolume(const ControlPoints& c) {
  Eigen::Matrix3d edges;
  edges.col(0) = c[0] - c[3];
  edges.col(1) = c[1] - c[3];
  edges.col(2) = c[2] - c[3];
  return edges.determinant() / 6.0;
}

namespace {

void RequireNonCoplanar(const ControlPoints& control) {
  double scale = 0.0;
  for (const auto& [i, j] : kControlPairs) {
    scale = std::max(scale, (control[i] - control[j]).norm());
  }
  const double volume = TetrahedronVolume(control);
  if (!std::isfinite(volume) || !(scale > 0.0) ||
      std::abs(volume) <= 1e-12 * scale * scale * scale) {
    Fail(ErrorCode::kSingularSystem, "control points are coplanar");
  }
}

}  // namespace

ControlPoints ChooseControlPoints(std::span<const Eigen::Vector3d> world,
                                  const ControlPointMode& mode) {
  if (world.size() < 4) {
    Fail(ErrorCode::kInsufficientPoints,
         "control point selection needs at least 4 points");
  }
  if (mode.is_explicit()) {
    RequireNonCoplanar(mode.points());
    return mode.points();
  }

  const double n = static_cast<double>(world.size());
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : world) centroid += p;
  centroid /= n;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : world) {
    const Eigen::Vector3d d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= n;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d values = eig.eigenvalues().cwiseMax(0.0);
  const double largest = std::sqrt(values(2));
  const double smallest = std::sqrt(values(0));
  if (!(largest > 0.0) || smallest < 1e-9 * largest) {
    Fail(ErrorCode::kDegenerateConfiguration,
         "world points are coplanar: degenerate principal axis");
  }

  ControlPoints control;
  control[0] = centroid;
  for (int k = 0; k < 3; ++k) {
    // Largest variance first.
    const int axis = 2 - k;
    control[k + 1] =
        centroid + std::sqrt(values(axis)) * eig.eigenvectors().col(axis);
  }
  // Eigenvector signs are arbitrary; keep the frame positively oriented.
  if (TetrahedronVolume(control) < 0.0) {
    control[3] = 2.0 * centroid - control[3];
  }
  return control;
}

Eigen::Vector4d BarycentricCoords(const Eigen::Vector3d& world,
                                  const ControlPoints& control) {
  const Eigen::Vector3d p = world;
  AlphaMatrix alphas = ComputeAlphas(std::span<const Eigen::Vector3d>(&p, 1),
                                     control);
  return alphas.row(0).transpose();
}

AlphaMatrix ComputeAlphas(std::span<const Eigen::Vector3d> world,
                          const ControlPoints& control) {
  RequireNonCoplanar(control);
  // The homogeneous 4x4 system [C1 C2 C3 C4; 1 1 1 1] a = [P; 1] reduced by
  // eliminating the last row: P - C4 = sum_{j<4} a_j (Cj - C4).
  Eigen::Matrix3d edges;
  for (int j = 0; j < 3; ++j) edges.col(j) = control[j] - control[3];
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(edges);

  AlphaMatrix alphas(static_cast<Eigen::Index>(world.size()), 4);
  for (std::size_t i = 0; i < world.size(); ++i) {
    const Eigen::Vector3d a = lu.solve(world[i] - control[3]);
    const auto row = static_cast<Eigen::Index>(i);
    alphas(row, 0) = a(0);
    alphas(row, 1) = a(1);
    alphas(row, 2) = a(2);
    alphas(row, 3) = 1.0 - a(0) - a(1) - a(2);
  }
  return alphas;
}

Eigen::MatrixXd BuildM(const CorrespondenceSet& corr, const AlphaMatrix& alphas,
                       const CameraIntrinsics& intr) {
  if (alphas.rows() != static_cast<Eigen::Index>(corr.size())) {
    Fail(ErrorCode::kLengthMismatch,
         "alpha rows do not match the number of correspondences");
  }
  const auto n = static_cast<Eigen::Index>(corr.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 12);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d& px = corr[static_cast<std::size_t>(i)].pixel;
    for (int j = 0; j < 4; ++j) {
      const double a = alphas(i, j);
      m(2 * i, 3 * j) = a * intr.fx;
      m(2 * i, 3 * j + 2) = a * (intr.u0 - px.x());
      m(2 * i + 1, 3 * j + 1) = a * intr.fy;
      m(2 * i + 1, 3 * j + 2) = a * (intr.v0 - px.y());
    }
  }
  return m;
}

NullSpace NullSpaceBasis(const Eigen::MatrixXd& m, int count) {
  if (count < 1 || count > 4) {
    Fail(ErrorCode::kInvalidArgument, "null basis size must be in 1..4");
  }
  if (m.cols() != 12) {
    Fail(ErrorCode::kInvalidArgument, "M must have 12 columns");
  }
  Eigen::MatrixXd padded = m;
  if (padded.rows() < 12) {
    padded.conservativeResize(12, 12);
    padded.bottomRows(12 - m.rows()).setZero();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  if (!svd.singularValues().allFinite()) {
    Fail(ErrorCode::kNumericalFailure, "SVD of M did not converge");
  }

  NullSpace ns;
  ns.basis.resize(12, count);
  for (int k = 0; k < 12; ++k) {
    ns.singular_values(k) = svd.singularValues()(11 - k);
  }
  for (int k = 0; k < count; ++k) {
    ns.basis.col(k) = svd.matrixV().col(11 - k);
  }
  return ns;
}

ControlFrame BuildControlFrame(const CorrespondenceSet& corr,
                               const CameraIntrinsics& intr,
                               const ControlPointMode& mode) {
  const std::vector<Eigen::Vector3d> world = WorldPoints(corr);
  ControlFrame frame;
  frame.control_world = ChooseControlPoints(world, mode);
  frame.alphas = ComputeAlphas(world, frame.control_world);
  NullSpace ns = NullSpaceBasis(BuildM(corr, frame.alphas, intr), 4);
  frame.basis = std::move(ns.basis);
  frame.singular_values = ns.singular_values;
  return frame;
}

Vector12d StackControlPoints(const ControlPoints& points) {
  Vector12d x;
  for (int j = 0; j < 4; ++j) x.segment<3>(3 * j) = points[j];
  return x;
}

ControlPoints UnstackControlPoints(const Vector12d& x) {
  ControlPoints points;
  for (int j = 0; j < 4; ++j) points[j] = x.segment<3>(3 * j);
  return points;
}

Vector12d CombineBasis(const Eigen::Vector4d& betas, const NullBasis& basis) {
  return PadBasis(basis) * betas;
}

Eigen::Vector4d SolveBetasClosedForm(const ControlFrame& frame,
                                     const CorrespondenceSet& corr,
                                     const CameraIntrinsics& intr) {
  if (frame.basis.cols() < 1) {
    Fail(ErrorCode::kInvalidArgument, "null basis is empty");
  }
  const std::array<double, 6> rho = WorldPairDistancesSq(frame.control_world);
  const auto dv1 = PairDifferences(frame.basis.col(0));

  std::vector<Eigen::Vector4d> candidates;

  // One null vector: beta1^2 |dv1|^2 = rho in least squares.
  {
    double num = 0.0;
    double den = 0.0;
    for (int p = 0; p < 6; ++p) {
      const double l = dv1[p].squaredNorm();
      num += l * rho[p];
      den += l * l;
    }
    if (den > 0.0) {
      candidates.emplace_back(std::sqrt(std::abs(num / den)), 0.0, 0.0, 0.0);
    }
  }

  // Two null vectors: unknowns (b11, b12, b22) with b_kl = beta_k beta_l.
  if (frame.basis.cols() >= 2) {
    const auto dv2 = PairDifferences(frame.basis.col(1));
    Eigen::Matrix<double, 6, 3> l;
    Eigen::Matrix<double, 6, 1> r;
    for (int p = 0; p < 6; ++p) {
      l(p, 0) = dv1[p].squaredNorm();
      l(p, 1) = 2.0 * dv1[p].dot(dv2[p]);
      l(p, 2) = dv2[p].squaredNorm();
      r(p) = rho[p];
    }
    const Eigen::Vector3d b = l.colPivHouseholderQr().solve(r);
    if (b.allFinite()) {
      Eigen::Vector4d beta = Eigen::Vector4d::Zero();
      if (b(0) < 0.0) {
        beta(0) = std::sqrt(-b(0));
        beta(1) = b(2) < 0.0 ? std::sqrt(-b(2)) : 0.0;
      } else {
        beta(0) = std::sqrt(b(0));
        beta(1) = b(2) > 0.0 ? std::sqrt(b(2)) : 0.0;
      }
      if (b(1) < 0.0) beta(0) = -beta(0);
      candidates.push_back(beta);
    }
  }

  Eigen::Vector4d best = Eigen::Vector4d::Zero();
  double best_error = std::numeric_limits<double>::infinity();
  bool found = false;
  for (Eigen::Vector4d beta : candidates) {
    double rms_depth = 0.0;
    double mean_depth =
        MeanDepth(CombineBasis(beta, frame.basis), frame.alphas, &rms_depth);
    if (mean_depth < 0.0) {
      beta = -beta;
      mean_depth = -mean_depth;
    }
    if (!std::isfinite(mean_depth) || mean_depth <= 1e-9 * rms_depth ||
        !(rms_depth > 0.0)) {
      continue;
    }
    double error = std::numeric_limits<double>::infinity();
    try {
      error = RecoverPose(beta, frame, corr, intr).reprojection_rms;
    } catch (const PoseError&) {
      continue;
    }
    if (!found || error < best_error) {
      best = beta;
      best_error = error;
      found = true;
    }
  }
  if (!found) {
    Fail(ErrorCode::kCheirality,
         "no beta candidate places the points in front of the camera");
  }
  return best;
}

double DistanceObjective(const Eigen::Vector4d& betas, const NullBasis& basis,
                         const ControlPoints& control_world,
                         const std::optional<PairWeights>& weights) {
  const std::array<double, 6> rho = WorldPairDistancesSq(control_world);
  const ControlPoints cam = UnstackControlPoints(CombineBasis(betas, basis));
  double sum = 0.0;
  for (std::size_t p = 0; p < kControlPairs.size(); ++p) {
    const auto [i, j] = kControlPairs[p];
    const double r = (cam[i] - cam[j]).squaredNorm() - rho[p];
    sum += (weights ? (*weights)[p] : 1.0) * r * r;
  }
  return sum;
}

GaussNewtonResult GaussNewtonRefine(const Eigen::Vector4d& betas0,
                                    const NullBasis& basis,
                                    const ControlPoints& control_world,
                                    const std::optional<PairWeights>& weights) {
  const Eigen::Matrix<double, 12, 4> b = PadBasis(basis);
  const std::array<double, 6> rho = WorldPairDistancesSq(control_world);
  std::array<double, 6> sqrt_w;
  for (int p = 0; p < 6; ++p) {
    const double w = weights ? (*weights)[p] : 1.0;
    if (!(w >= 0.0) || !std::isfinite(w)) {
      Fail(ErrorCode::kInvalidArgument, "Gauss-Newton weights must be >= 0");
    }
    sqrt_w[p] = std::sqrt(w);
  }
  std::array<std::array<Eigen::Vector3d, 6>, 4> dv;
  for (int k = 0; k < 4; ++k) dv[k] = PairDifferences(b.col(k));

  auto evaluate = [&](const Eigen::Vector4d& beta,
                      Eigen::Matrix<double, 6, 1>* residual,
                      Eigen::Matrix<double, 6, 4>* jacobian) {
    const Vector12d x = b * beta;
    for (int p = 0; p < 6; ++p) {
      const auto [i, j] = kControlPairs[p];
      const Eigen::Vector3d d = x.segment<3>(3 * i) - x.segment<3>(3 * j);
      (*residual)(p) = sqrt_w[p] * (d.squaredNorm() - rho[p]);
      if (jacobian != nullptr) {
        for (int k = 0; k < 4; ++k) {
          (*jacobian)(p, k) = sqrt_w[p] * 2.0 * d.dot(dv[k][p]);
        }
      }
    }
    return residual->squaredNorm();
  };

  GaussNewtonResult result;
  result.betas = betas0;
  Eigen::Matrix<double, 6, 1> r;
  Eigen::Matrix<double, 6, 4> jac;
  double objective = evaluate(result.betas, &r, &jac);
  if (!std::isfinite(objective)) {
    Fail(ErrorCode::kNumericalFailure, "Gauss-Newton objective is not finite");
  }
  result.initial_objective = objective;
  // Residuals at rounding level carry no descent information.
  double floor = 0.0;
  for (int p = 0; p < 6; ++p) floor += sqrt_w[p] * sqrt_w[p] * rho[p] * rho[p];
  floor *= kGaussNewtonObjectiveFloor * kGaussNewtonObjectiveFloor;

  for (int it = 0; it < kMaxGaussNewtonIterations && objective > floor;
       ++it) {
    Eigen::Vector4d step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    // Backtrack on the step length until the objective does not increase.
    Eigen::Vector4d candidate;
    Eigen::Matrix<double, 6, 1> r_next;
    Eigen::Matrix<double, 6, 4> jac_next;
    double next = std::numeric_limits<double>::infinity();
    for (int halving = 0; halving <= kGaussNewtonMaxHalvings; ++halving) {
      candidate = result.betas + step;
      next = evaluate(candidate, &r_next, &jac_next);
      if (std::isfinite(next) && next <= objective) break;
      step *= 0.5;
    }
    if (!std::isfinite(next) || next > objective) break;
    const double decrease = objective - next;
    result.betas = candidate;
    result.iterations = it + 1;
    r = r_next;
    jac = jac_next;
    objective = next;
    if (decrease <= kGaussNewtonRelativeDecrease * (objective + decrease)) {
      break;
    }
  }
  result.final_objective = objective;
  return result;
}

Eigen::Vector4d OrientBetas(const Eigen::Vector4d& betas,
                            const ControlFrame& frame) {
  double rms_depth = 0.0;
  const double mean_depth =
      MeanDepth(CombineBasis(betas, frame.basis), frame.alphas, &rms_depth);
  return mean_depth < 0.0 ? Eigen::Vector4d(-betas) : betas;
}

std::vector<Eigen::Vector3d> ReconstructCameraPoints(
    const Eigen::Vector4d& betas, const ControlFrame& frame) {
  const ControlPoints cam =
      UnstackControlPoints(CombineBasis(betas, frame.basis));
  std::vector<Eigen::Vector3d> points(static_cast<std::size_t>(frame.alphas.rows()));
  for (Eigen::Index i = 0; i < frame.alphas.rows(); ++i) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int j = 0; j < 4; ++j) p += frame.alphas(i, j) * cam[j];
    points[static_cast<std::size_t>(i)] = p;
  }
  return points;
}

SolveReport RecoverPose(const Eigen::Vector4d& betas, const ControlFrame& frame,
                        const CorrespondenceSet& corr,
                        const CameraIntrinsics& intr) {
  if (!betas.allFinite()) {
    Fail(ErrorCode::kNumericalFailure, "betas are not finite");
  }
  const std::vector<Eigen::Vector3d> camera =
      ReconstructCameraPoints(betas, frame);
  const std::vector<Eigen::Vector3d> world = WorldPoints(corr);
  SolveReport report;
  report.pose = AbsoluteOrientation(world, camera);
  report.reprojection_rms = ReprojectionRms(corr, intr, report.pose);
  return report;
}

}  // namespace ppnp
