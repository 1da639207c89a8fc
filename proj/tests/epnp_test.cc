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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "ppnp/epnp.h"
#include "ppnp/error.h"
#include "ppnp/solver.h"
#include "test_util.h"

namespace ppnp {
namespace {

using testing::BiprismControl;
using testing::OracleRotationAngleDeg;
using testing::ReferenceIntrinsics;
using testing::RelativeTranslationError;
using testing::TrueControlStack;

const CameraIntrinsics kRef = ReferenceIntrinsics();

template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const PoseError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected PoseError";
  return ErrorCode::kInvalidArgument;
}

testing::TestScene BiprismAt800(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return testing::BiprismScene(rng, 50.0, Eigen::Vector3d(30, -20, 800), kRef);
}

ControlFrame BiprismFrame(const testing::TestScene& s) {
  return BuildControlFrame(s.corr, kRef,
                           ControlPointMode::Explicit(BiprismControl(50)));
}

// Betas of the exact solution in a frame's basis.
Eigen::Vector4d ExactBetas(const ControlFrame& f, const testing::TestScene& s) {
  return f.basis.transpose() * TrueControlStack(f.control_world, s.r, s.t);
}

TEST(ControlPoints, ExplicitBiprism) {
  const auto s = BiprismAt800(1);
  const ControlPoints c = ChooseControlPoints(
      s.world, ControlPointMode::Explicit(BiprismControl(50)));
  EXPECT_EQ(c[0], Eigen::Vector3d(50, 0, 0));
  EXPECT_EQ(c[1], Eigen::Vector3d(0, 50, 0));
  EXPECT_EQ(c[2], Eigen::Vector3d(0, 0, 50));
  EXPECT_EQ(c[3], Eigen::Vector3d(0, 0, 0));
}

TEST(ControlPoints, CentroidOfUnitTetrahedron) {
  const std::vector<Eigen::Vector3d> w = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const ControlPoints c =
      ChooseControlPoints(w, ControlPointMode::CentroidPca());
  EXPECT_LT((c[0] - Eigen::Vector3d(0.25, 0.25, 0.25)).norm(), 1e-15);
}

TEST(ControlPoints, PcaOnRandomCloud) {
  std::mt19937_64 rng(2);
  std::vector<Eigen::Vector3d> w;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int i = 0; i < 10; ++i) {
    w.push_back(testing::RandomVector(rng, -100, 100));
    mean += w.back();
  }
  mean /= 10.0;
  const ControlPoints c =
      ChooseControlPoints(w, ControlPointMode::CentroidPca());
  EXPECT_GT(TetrahedronVolume(c), 0.0);
  EXPECT_LT((c[0] - mean).norm(), 1e-12);
  // Offsets are orthogonal and carry the per-axis standard deviation.
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : w) cov += (p - mean) * (p - mean).transpose();
  cov /= 10.0;
  for (int k = 1; k < 4; ++k) {
    const Eigen::Vector3d d = c[k] - c[0];
    const Eigen::Vector3d u = d.normalized();
    EXPECT_NEAR(d.squaredNorm(), u.dot(cov * u), 1e-9 * cov.norm());
  }
  EXPECT_NEAR((c[1] - c[0]).dot(c[2] - c[0]), 0.0, 1e-9);
}

TEST(ControlPoints, CoplanarCloudRejected) {
  std::vector<Eigen::Vector3d> w = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}};
  EXPECT_EQ(CodeOf([&] {
              ChooseControlPoints(w, ControlPointMode::CentroidPca());
            }),
            ErrorCode::kDegenerateConfiguration);
}

TEST(Barycentric, VertexMidpointAndReconstruction) {
  const ControlPoints c = BiprismControl(50);
  Eigen::Vector4d a = BarycentricCoords(c[3], c);
  EXPECT_LT((a - Eigen::Vector4d(0, 0, 0, 1)).norm(), 1e-15);
  a = BarycentricCoords(0.5 * (c[0] + c[1]), c);
  EXPECT_LT((a - Eigen::Vector4d(0.5, 0.5, 0, 0)).norm(), 1e-15);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d p = testing::RandomVector(rng, -200, 200);
    a = BarycentricCoords(p, c);
    Eigen::Vector3d q = Eigen::Vector3d::Zero();
    for (int j = 0; j < 4; ++j) q += a(j) * c[j];
    EXPECT_LT((q - p).norm(), 1e-10);
    EXPECT_NEAR(a.sum(), 1.0, 1e-12);
  }
}

TEST(Barycentric, CoplanarControlPointsRejected) {
  ControlPoints c = BiprismControl(50);
  c[2] = Eigen::Vector3d(20, 20, 0);
  EXPECT_EQ(CodeOf([&] { BarycentricCoords(Eigen::Vector3d(1, 2, 3), c); }),
            ErrorCode::kSingularSystem);
}

TEST(BuildM, ShapeAndExactNullVector) {
  const auto s = BiprismAt800(4);
  const ControlPoints c = BiprismControl(50);
  const AlphaMatrix alphas = ComputeAlphas(s.world, c);
  const Eigen::MatrixXd m = BuildM(s.corr, alphas, kRef);
  EXPECT_EQ(m.rows(), 12);
  EXPECT_EQ(m.cols(), 12);
  const Vector12d x = TrueControlStack(c, s.r, s.t);
  EXPECT_LT((m * x).norm() / x.norm(), 1e-9);
}

TEST(BuildM, PrincipalPointObservationHasNoDepthTerms) {
  CorrespondenceSet corr = {{Eigen::Vector3d(1, 2, 3), Eigen::Vector2d(653, 508)}};
  AlphaMatrix alphas(1, 4);
  alphas << 1, 0, 0, 0;
  const Eigen::MatrixXd m = BuildM(corr, alphas, kRef);
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_EQ(m(1, 2), 0.0);
  EXPECT_EQ(m(0, 0), kRef.fx);
  EXPECT_EQ(m(1, 1), kRef.fy);
}

TEST(NullSpace, ExactSceneIsRankDeficientAndBasisOrthonormal) {
  const auto s = BiprismAt800(5);
  const AlphaMatrix alphas = ComputeAlphas(s.world, BiprismControl(50));
  const NullSpace ns = NullSpaceBasis(BuildM(s.corr, alphas, kRef), 4);
  ASSERT_EQ(ns.basis.cols(), 4);
  EXPECT_LT(ns.singular_values(0) / ns.singular_values(11), 1e-9);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(ns.basis.col(i).norm(), 1.0, 1e-12);
    for (int j = 0; j < i; ++j) {
      EXPECT_LT(std::abs(ns.basis.col(i).dot(ns.basis.col(j))), 1e-10);
    }
  }
  for (int k = 1; k < 12; ++k) {
    EXPECT_LE(ns.singular_values(k - 1), ns.singular_values(k));
  }
  EXPECT_EQ(NullSpaceBasis(BuildM(s.corr, alphas, kRef), 2).basis.cols(), 2);
}

TEST(ClosedForm, SingleDirectionScene) {
  const auto s = BiprismAt800(6);
  ControlFrame f = BiprismFrame(s);
  const Vector12d x = TrueControlStack(f.control_world, s.r, s.t);
  // Orthonormal basis whose first vector points away from x_true.
  Eigen::Matrix<double, 12, 12> q = Eigen::Matrix<double, 12, 12>::Random();
  q.col(0) = -x;
  const Eigen::HouseholderQR<Eigen::Matrix<double, 12, 12>> qr(q);
  Eigen::Matrix<double, 12, 12> basis = qr.householderQ();
  if (basis.col(0).dot(x) > 0) basis.col(0) = -basis.col(0);
  f.basis = basis.leftCols(4);
  const Eigen::Vector4d beta = SolveBetasClosedForm(f, s.corr, kRef);
  EXPECT_NEAR(std::abs(beta(0)), x.norm(), 1e-9 * x.norm());
  EXPECT_LT(beta.tail<3>().norm(), 1e-6 * x.norm());
  EXPECT_LT((CombineBasis(beta, f.basis) - x).norm(), 1e-6);
}

TEST(ClosedForm, BiprismRecoversControlPoints) {
  const auto s = BiprismAt800(7);
  const ControlFrame f = BiprismFrame(s);
  const Eigen::Vector4d beta = SolveBetasClosedForm(f, s.corr, kRef);
  const Vector12d x = TrueControlStack(f.control_world, s.r, s.t);
  const Vector12d got = CombineBasis(beta, f.basis);
  for (int j = 0; j < 4; ++j) {
    EXPECT_LT((got.segment<3>(3 * j) - x.segment<3>(3 * j)).norm(), 1e-6);
  }
}

// Points at +P and -P have identical images; with the centroid at the
// camera centre no sign puts the cloud in front of the camera.
TEST(ClosedForm, CheiralityFailure) {
  std::vector<Eigen::Vector3d> half = {
      {100, 20, 300}, {-50, 80, 400}, {30, -90, 500}, {70, 60, 650}};
  std::vector<Eigen::Vector3d> world;
  for (const auto& p : half) {
    world.push_back(p);
    world.push_back(-p);
  }
  const auto corr = testing::MakeCorrespondences(
      world, kRef, Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero());
  EXPECT_EQ(CodeOf([&] {
              const ControlFrame f = BuildControlFrame(
                  corr, kRef, ControlPointMode::CentroidPca());
              SolveBetasClosedForm(f, corr, kRef);
            }),
            ErrorCode::kCheirality);
}

TEST(GaussNewton, ExactBetasAreAFixedPoint) {
  const auto s = BiprismAt800(8);
  const ControlFrame f = BiprismFrame(s);
  const Eigen::Vector4d exact = ExactBetas(f, s);
  const GaussNewtonResult r =
      GaussNewtonRefine(exact, f.basis, f.control_world);
  EXPECT_LT((r.betas - exact).norm(), 1e-10 * exact.norm());
  EXPECT_LE(r.iterations, 1);
}

TEST(GaussNewton, ConvergesFromPerturbedBetas) {
  const auto s = BiprismAt800(9);
  const ControlFrame f = BiprismFrame(s);
  const Eigen::Vector4d exact = ExactBetas(f, s);
  const Eigen::Vector4d start = exact * 1.01;
  const GaussNewtonResult r = GaussNewtonRefine(start, f.basis, f.control_world);
  EXPECT_GT(r.initial_objective, 0.0);
  EXPECT_LT(r.final_objective, 1e-12 * r.initial_objective);
  EXPECT_LE(r.final_objective, r.initial_objective);
  EXPECT_LT((r.betas - exact).norm(), 1e-6 * exact.norm());
}

TEST(GaussNewton, UniformWeightScaleDoesNotMoveArgmin) {
  std::mt19937_64 rng(10);
  auto s = testing::RandomCloudScene(rng, 10, kRef);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& c : s.corr) c.pixel += Eigen::Vector2d(noise(rng), noise(rng));
  const ControlFrame f =
      BuildControlFrame(s.corr, kRef, ControlPointMode::CentroidPca());
  const Eigen::Vector4d b0 = SolveBetasClosedForm(f, s.corr, kRef);
  PairWeights ones, scaled;
  ones.fill(1.0);
  scaled.fill(7.5);
  const auto a = GaussNewtonRefine(b0, f.basis, f.control_world, ones);
  const auto b = GaussNewtonRefine(b0, f.basis, f.control_world, scaled);
  const auto c = GaussNewtonRefine(b0, f.basis, f.control_world);
  EXPECT_LT((a.betas - b.betas).norm(), 1e-10 * a.betas.norm());
  EXPECT_LT((a.betas - c.betas).norm(), 1e-10 * a.betas.norm());
}

TEST(GaussNewton, NonFiniteObjectiveFails) {
  const auto s = BiprismAt800(11);
  ControlFrame f = BiprismFrame(s);
  f.basis(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(CodeOf([&] {
              GaussNewtonRefine(Eigen::Vector4d(1, 0, 0, 0), f.basis,
                                f.control_world);
            }),
            ErrorCode::kNumericalFailure);
}

TEST(RecoverPose, ExactBetasGiveTruePose) {
  const auto s = BiprismAt800(12);
  const ControlFrame f = BiprismFrame(s);
  const SolveReport r = RecoverPose(ExactBetas(f, s), f, s.corr, kRef);
  EXPECT_LT(OracleRotationAngleDeg(r.pose.rotation, s.r), 1e-6);
  EXPECT_LT(RelativeTranslationError(s.t, r.pose.translation), 1e-8);
  EXPECT_LT(r.reprojection_rms, 1e-6);
}

TEST(RecoverPose, ZeroBetasAreRankDeficient) {
  const auto s = BiprismAt800(13);
  const ControlFrame f = BiprismFrame(s);
  EXPECT_EQ(CodeOf([&] {
              RecoverPose(Eigen::Vector4d::Zero(), f, s.corr, kRef);
            }),
            ErrorCode::kRankDeficient);
}

TEST(RecoverPose, FlippedBetasAreReorientedUpstream) {
  const auto s = BiprismAt800(14);
  const ControlFrame f = BiprismFrame(s);
  const Eigen::Vector4d fixed = OrientBetas(-ExactBetas(f, s), f);
  for (const auto& p : ReconstructCameraPoints(fixed, f)) EXPECT_GT(p.z(), 0);
  const SolveReport r = RecoverPose(fixed, f, s.corr, kRef);
  EXPECT_LT(OracleRotationAngleDeg(r.pose.rotation, s.r), 1e-6);
}

TEST(SolveEpnp, NoiseFreeRandomCloud) {
  std::mt19937_64 rng(15);
  const auto s = testing::RandomCloudScene(rng, 10, kRef);
  EpnpOptions opt;
  opt.refine = true;
  const SolveReport r = SolveEpnp(s.corr, kRef, opt);
  EXPECT_LT(OracleRotationAngleDeg(r.pose.rotation, s.r), 1e-6);
  EXPECT_LT(RelativeTranslationError(s.t, r.pose.translation), 1e-8);
}

TEST(SolveEpnp, ThreePointsRejected) {
  std::mt19937_64 rng(16);
  const auto s = testing::RandomCloudScene(rng, 3, kRef);
  EXPECT_EQ(CodeOf([&] { SolveEpnp(s.corr, kRef); }),
            ErrorCode::kInsufficientPoints);
}

TEST(SolveEpnp, AccuracyImprovesWithPointCount) {
  auto median_error = [](int n) {
    std::mt19937_64 rng(1000 + n);
    std::normal_distribution<double> noise(0.0, 0.2);
    std::vector<double> errors;
    for (int t = 0; t < 200; ++t) {
      auto s = testing::RandomCloudScene(rng, n, kRef);
      for (auto& c : s.corr) c.pixel += Eigen::Vector2d(noise(rng), noise(rng));
      try {
        const SolveReport r = SolveEpnp(s.corr, kRef);
        errors.push_back(OracleRotationAngleDeg(r.pose.rotation, s.r));
      } catch (const PoseError&) {
        errors.push_back(180.0);
      }
    }
    std::nth_element(errors.begin(), errors.begin() + 100, errors.end());
    return errors[100];
  };
  EXPECT_LT(median_error(12), median_error(4));
}

TEST(SolveEpnp, WeightedReportIsTagged) {
  const auto s = BiprismAt800(17);
  EpnpOptions opt;
  opt.initializer = Initializer::kParaperspective;
  opt.weighting = Weighting::kErrorTransfer;
  opt.control_points = ControlPointMode::Explicit(BiprismControl(50));
  const SolveReport r = SolveEpnp(s.corr, kRef, opt);
  EXPECT_TRUE(r.weighted);
  EXPECT_EQ(r.initializer, Initializer::kParaperspective);
  EXPECT_LT(OracleRotationAngleDeg(r.pose.rotation, s.r), 1e-6);
}

TEST(Solve, EveryInitializerIsExactOnNoiseFreeData) {
  std::mt19937_64 rng(18);
  const auto s = testing::RandomCloudScene(rng, 10, kRef);
  for (SolverKind k : AllSolvers()) {
    if (k == SolverKind::kWeak) continue;
    const SolveReport r = Solve(k, s.corr, kRef);
    EXPECT_LT(r.reprojection_rms, 1e-6) << SolverLabel(k);
  }
}

TEST(Solve, Labels) {
  for (SolverKind k : AllSolvers()) {
    EXPECT_EQ(ParseSolverLabel(SolverLabel(k)), k);
  }
  EXPECT_FALSE(ParseSolverLabel("opnp").has_value());
  EXPECT_EQ(MinimumPoints(SolverKind::kDlt), 6u);
  EXPECT_EQ(MinimumPoints(SolverKind::kParallelWeight), 4u);
}

}  // namespace
}  // namespace ppnp
