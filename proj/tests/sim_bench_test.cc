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
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include "ppnp/error.h"
#include "ppnp/sim_bench.h"
#include "ppnp/solver.h"
#include "test_util.h"

namespace ppnp {
namespace {

using testing::kPi;

Eigen::Matrix3d RotZ(double deg) {
  return Eigen::AngleAxisd(deg * kPi / 180.0, Eigen::Vector3d::UnitZ())
      .toRotationMatrix();
}

// Column-angle metric written with acos, independently of the library.
double OracleColumnError(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double c = std::clamp(a.col(k).dot(b.col(k)), -1.0, 1.0);
    worst = std::max(worst, std::acos(c) * 180.0 / kPi);
  }
  return worst;
}

TEST(Biprism, ControlPointsAndSymmetry) {
  const BiprismTarget t = MakeBiprismTarget(50);
  EXPECT_EQ(t.control_points[0], Eigen::Vector3d(50, 0, 0));
  EXPECT_EQ(t.control_points[3], Eigen::Vector3d(0, 0, 0));
  ASSERT_EQ(t.points.size(), 6u);
  EXPECT_EQ(t.points[0], Eigen::Vector3d(0, 0, 50));
  EXPECT_EQ(t.points[1], Eigen::Vector3d(50, 0, 0));
  EXPECT_EQ(t.points[4], Eigen::Vector3d(0, 50, 0));
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : t.points) centroid += p;
  EXPECT_EQ(centroid, Eigen::Vector3d::Zero());
  for (const auto& p : t.points) EXPECT_DOUBLE_EQ(p.norm(), 50.0);
  EXPECT_THROW(MakeBiprismTarget(0), PoseError);
}

TEST(GenerateScene, DeterministicPerTrial) {
  SceneConfig cfg;
  cfg.seed = 99;
  cfg.noise_sigma = 0.5;
  const Scene a = GenerateScene(cfg, 7);
  const Scene b = GenerateScene(cfg, 7);
  const Scene c = GenerateScene(cfg, 8);
  ASSERT_EQ(a.corr.size(), 10u);
  for (std::size_t i = 0; i < a.corr.size(); ++i) {
    EXPECT_EQ(a.corr[i].world, b.corr[i].world);
    EXPECT_EQ(a.corr[i].pixel, b.corr[i].pixel);
  }
  EXPECT_EQ(a.truth.rotation, b.truth.rotation);
  EXPECT_NE(a.corr[0].pixel, c.corr[0].pixel);
}

TEST(GenerateScene, NoiseFreeSceneIsSolvedExactly) {
  SceneConfig cfg;
  cfg.seed = 5;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Scene s = GenerateScene(cfg, trial);
    for (const auto& c : s.corr) {
      EXPECT_GT(s.truth.Apply(c.world).z(), 0.0);
      EXPECT_LT((Project(cfg.intrinsics, s.truth, c.world) - c.pixel).norm(),
                1e-9);
    }
    const SolveReport r = SolveEpnp(s.corr, cfg.intrinsics);
    EXPECT_LT(RotationError(s.truth.rotation, r.pose.rotation), 1e-6);
  }
}

TEST(GenerateScene, BiprismHasSixPoints) {
  SceneConfig cfg;
  cfg.target = TargetKind::kBiprism;
  cfg.seed = 3;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const Scene s = GenerateScene(cfg, trial);
    EXPECT_EQ(s.corr.size(), 6u);
    ASSERT_TRUE(s.control_points.has_value());
    EXPECT_EQ((*s.control_points)[1], Eigen::Vector3d(0, 50, 0));
  }
}

TEST(GenerateScene, ImpossiblePlacementIsAConfigurationError) {
  SceneConfig cfg;
  cfg.target = TargetKind::kBiprism;
  cfg.biprism_l = 50;
  // Origin 10 mm in front of the camera: the biprism always straddles z = 0.
  cfg.pose.origin_region = Box{{0, 0, 10}, {1, 1, 11}};
  try {
    GenerateScene(cfg, 0);
    FAIL();
  } catch (const PoseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
}

TEST(SceneConfig, Validation) {
  SceneConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(cfg.Validate(), PoseError);
  cfg = SceneConfig();
  cfg.box.min.z() = -1;
  EXPECT_THROW(cfg.Validate(), PoseError);
}

TEST(AddNoise, ZeroSigmaIsIdentity) {
  std::vector<Eigen::Vector2d> px = {{1.25, 2.5}, {300, 400}};
  Rng rng(1);
  EXPECT_EQ(AddNoise(px, 0.0, rng), px);
}

TEST(AddNoise, UnitSigmaStatistics) {
  std::vector<Eigen::Vector2d> px(50000, Eigen::Vector2d(10, 20));
  Rng rng(2);
  const auto out = AddNoise(px, 1.0, rng);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      const double d = out[i](k) - px[i](k);
      sum += d;
      sq += d * d;
    }
  }
  const double n = 2.0 * out.size();
  const double std_dev = std::sqrt(sq / n - (sum / n) * (sum / n));
  EXPECT_GE(std_dev, 0.99);
  EXPECT_LE(std_dev, 1.01);
}

TEST(AddNoise, DeterministicForFixedState) {
  std::vector<Eigen::Vector2d> px(20, Eigen::Vector2d(1, 1));
  Rng a(3), b(3);
  EXPECT_EQ(AddNoise(px, 2.0, a), AddNoise(px, 2.0, b));
}

TEST(RotationError, Examples) {
  EXPECT_EQ(RotationError(RotZ(37), RotZ(37)), 0.0);
  EXPECT_NEAR(RotationError(Eigen::Matrix3d::Identity(), RotZ(1)), 1.0, 1e-12);
}

TEST(RotationError, MatchesIndependentImplementation) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Matrix3d a = testing::RandomRotation(rng);
    const Eigen::Matrix3d b = testing::RandomRotation(rng);
    EXPECT_NEAR(RotationError(a, b), OracleColumnError(a, b), 1e-10);
  }
}

TEST(TranslationError, Examples) {
  const Eigen::Vector3d t(30, -40, 700);
  EXPECT_EQ(TranslationError(t, t), 0.0);
  EXPECT_NEAR(TranslationError(t, 1.01 * t), 1.0, 1e-12);
  try {
    TranslationError(Eigen::Vector3d::Zero(), t);
    FAIL();
  } catch (const PoseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

RigidPose Pose(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
  RigidPose p;
  p.rotation = r;
  p.translation = t;
  return p;
}

TEST(EvaluateSequence, ConstantEstimatesAndIdentityTruth) {
  const std::vector<RigidPose> est(4, Pose(RotZ(20), {1, 2, 600}));
  const std::vector<RigidPose> rel(3, RigidPose());
  const auto rows = EvaluateSequence(est, rel);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.rot_error_deg, 0.0);
}

TEST(EvaluateSequence, ExactEstimates) {
  std::vector<RigidPose> est = {Pose(RotZ(0), {0, 0, 500})};
  std::vector<RigidPose> rel;
  for (int k = 1; k <= 3; ++k) {
    const RigidPose step = Pose(RotZ(3.0 * k), Eigen::Vector3d(5.0 * k, -2, 1));
    rel.push_back(step);
    est.push_back(Pose(est.back().rotation * step.rotation,
                       est.back().translation + step.translation));
  }
  for (const auto& r : EvaluateSequence(est, rel)) {
    EXPECT_LT(r.rot_error_deg, 1e-12);
    EXPECT_LT(r.trans_error_pct, 1e-12);
    EXPECT_EQ(r.status, "ok");
  }
}

TEST(EvaluateSequence, ExtraHalfDegree) {
  const std::vector<RigidPose> est = {Pose(RotZ(10), {0, 0, 500}),
                                      Pose(RotZ(12.5), {0, 0, 500})};
  const std::vector<RigidPose> rel = {Pose(RotZ(2), Eigen::Vector3d::Zero())};
  const auto rows = EvaluateSequence(est, rel);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].rot_error_deg, 0.5, 1e-9);
  EXPECT_TRUE(std::isnan(rows[0].trans_error_pct));
}

TEST(EvaluateSequence, LengthMismatch) {
  const std::vector<RigidPose> est(3);
  const std::vector<RigidPose> rel(3);
  try {
    EvaluateSequence(est, rel);
    FAIL();
  } catch (const PoseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Protocols, DefaultSweeps) {
  std::vector<double> expected;
  for (int n = 4; n <= 20; ++n) expected.push_back(n);
  EXPECT_EQ(DefaultSweep(Protocol::kFeatureCount), expected);
  expected.clear();
  for (int k = 0; k <= 20; ++k) expected.push_back(0.5 * k);
  EXPECT_EQ(DefaultSweep(Protocol::kNoise), expected);
  expected.clear();
  for (int n = 4; n <= 104; n += 4) expected.push_back(n);
  EXPECT_EQ(DefaultSweep(Protocol::kTiming), expected);
}

TEST(Protocols, NamesRoundTrip) {
  for (Protocol p : {Protocol::kFeatureCount, Protocol::kNoise,
                     Protocol::kTiming, Protocol::kDepthRatio,
                     Protocol::kOffAxis, Protocol::kAngle}) {
    EXPECT_EQ(ParseProtocol(ProtocolName(p)), p);
  }
  EXPECT_FALSE(ParseProtocol("bogus").has_value());
}

std::string CsvWithoutTiming(const ExperimentResult& r) {
  std::ostringstream csv;
  WriteCsv(csv, r);
  // Drop the solve_time_s column (seventh field).
  std::istringstream in(csv.str());
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    f.erase(f.begin() + 6);
    for (const auto& c : f) out += c + ",";
    out += "\n";
  }
  return out;
}

TEST(RunExperiment, DeterministicAcrossWorkerCounts) {
  ExperimentOverrides ov;
  ov.trials = 5;
  ov.sweep = std::vector<double>{0.0, 2.0};
  const std::vector<SolverKind> solvers = {SolverKind::kEpnp,
                                           SolverKind::kParallelWeight};
  const auto a = RunExperiment(Protocol::kNoise, ov, solvers, 11);
  ov.workers = 3;
  const auto b = RunExperiment(Protocol::kNoise, ov, solvers, 11);
  EXPECT_EQ(CsvWithoutTiming(a), CsvWithoutTiming(b));
  const auto c = RunExperiment(Protocol::kNoise, ov, solvers, 12);
  EXPECT_NE(CsvWithoutTiming(a), CsvWithoutTiming(c));
}

TEST(RunExperiment, RowsAndAggregates) {
  ExperimentOverrides ov;
  ov.trials = 4;
  ov.sweep = std::vector<double>{6.0};
  const std::vector<SolverKind> solvers = {SolverKind::kEpnpGn};
  const auto r = RunExperiment(Protocol::kFeatureCount, ov, solvers, 1);
  ASSERT_EQ(r.rows.size(), 4u + 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(r.rows[i].status, "ok");
    EXPECT_EQ(r.rows[i].trial_index, i);
    EXPECT_EQ(r.rows[i].sweep_value, 6.0);
  }
  EXPECT_EQ(r.rows[4].status, "aggregate_mean");
  EXPECT_EQ(r.rows[5].status, "aggregate_median");
  EXPECT_EQ(r.rows[6].status, "aggregate_mean_all");
  EXPECT_EQ(r.rows[7].status, "aggregate_median_all");
  EXPECT_EQ(r.rows[5].rot_error_deg, r.rows[7].rot_error_deg);
  bool has_noise_model = false;
  for (const auto& [k, v] : r.metadata) {
    if (k == "noise_model") has_noise_model = v == "gaussian_sigma_px";
  }
  EXPECT_TRUE(has_noise_model);
}

TEST(RunExperiment, FailuresAreRecorded) {
  ExperimentOverrides ov;
  ov.trials = 3;
  ov.sweep = std::vector<double>{5.0};
  // Five points are below the DLT minimum.
  const std::vector<SolverKind> solvers = {SolverKind::kDlt};
  const auto r = RunExperiment(Protocol::kFeatureCount, ov, solvers, 1);
  EXPECT_EQ(r.rows[0].status, "error:insufficient-points");
  EXPECT_TRUE(std::isnan(r.rows[0].rot_error_deg));
  EXPECT_TRUE(std::isinf(r.rows.back().rot_error_deg));
  bool recorded = false;
  for (const auto& [k, v] : r.metadata) {
    if (k == "failed_trials.dlt") recorded = v == "3";
  }
  EXPECT_TRUE(recorded);
}

TEST(FormatNumber, SpecialValues) {
  EXPECT_EQ(FormatNumber(0.5), "0.5");
  EXPECT_EQ(FormatNumber(std::nan("")), "nan");
  EXPECT_EQ(FormatNumber(-std::numeric_limits<double>::infinity()), "-inf");
}

}  // namespace
}  // namespace ppnp
