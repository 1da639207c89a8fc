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

#include "ppnp/solver.h"

#include <array>
#include <optional>

#include "ppnp/baselines.h"
#include "ppnp/error.h"
#include "ppnp/error_transfer.h"
#include "ppnp/paraperspective.h"

namespace ppnp {

SolveReport SolveEpnp(const CorrespondenceSet& corr,
                      const CameraIntrinsics& intr,
                      const EpnpOptions& options) {
  ValidateCorrespondences(corr, 4);
  intr.Validate();
  const ControlFrame frame =
      BuildControlFrame(corr, intr, options.control_points);

  Eigen::Vector4d betas;
  RigidPose coarse;
  switch (options.initializer) {
    case Initializer::kEpnpClosedForm:
      betas = SolveBetasClosedForm(frame, corr, intr);
      if (options.weighting == Weighting::kErrorTransfer) {
        coarse = RecoverPose(betas, frame, corr, intr).pose;
      }
      break;
    case Initializer::kWeakPerspective:
      coarse = WeakPerspectivePose(corr, intr, options.origin_index);
      betas = InitBetas(coarse, frame);
      break;
    case Initializer::kParaperspective:
      coarse = FitParaperspective(corr, intr, options.origin_index).pose;
      betas = InitBetas(coarse, frame);
      break;
    case Initializer::kDirectLinear:
      Fail(ErrorCode::kInvalidArgument, "DLT is not an EPnP initializer");
  }

  int iterations = 0;
  const bool weighted =
      options.refine && options.weighting == Weighting::kErrorTransfer;
  std::optional<PairWeights> weights;
  if (weighted) weights = ComputeGnWeights(frame.control_world, coarse);
  if (options.refine) {
    const GaussNewtonResult gn =
        GaussNewtonRefine(betas, frame.basis, frame.control_world, weights);
    betas = OrientBetas(gn.betas, frame);
    iterations = gn.iterations;
  }

  SolveReport report = RecoverPose(betas, frame, corr, intr);
  // GN over four betas is not convex; a geometric start far from the truth
  // (deep clouds) can stall in a local minimum. Keep the closed-form start
  // as a second candidate and return the better reprojection.
  const bool geometric = options.initializer == Initializer::kWeakPerspective ||
                         options.initializer == Initializer::kParaperspective;
  if (geometric && options.refine && options.compare_closed_form) {
    try {
      const GaussNewtonResult gn = GaussNewtonRefine(
          SolveBetasClosedForm(frame, corr, intr), frame.basis,
          frame.control_world, weights);
      const SolveReport alt =
          RecoverPose(OrientBetas(gn.betas, frame), frame, corr, intr);
      if (alt.reprojection_rms < report.reprojection_rms) {
        report = alt;
        iterations = gn.iterations;
      }
    } catch (const PoseError&) {
      // The geometric candidate stands on its own.
    }
  }
  report.gn_iterations = iterations;
  report.initializer = options.initializer;
  report.weighted = weighted;
  return report;
}

namespace {

constexpr std::array<SolverKind, 6> kAllSolvers = {
    SolverKind::kDlt,      SolverKind::kEpnp,           SolverKind::kEpnpGn,
    SolverKind::kParallel, SolverKind::kParallelWeight, SolverKind::kWeak};

}  // namespace

std::string_view SolverLabel(SolverKind kind) {
  switch (kind) {
    case SolverKind::kDlt:
      return "dlt";
    case SolverKind::kEpnp:
      return "epnp";
    case SolverKind::kEpnpGn:
      return "epnp-gn";
    case SolverKind::kParallel:
      return "parallel";
    case SolverKind::kParallelWeight:
      return "parallel-weight";
    case SolverKind::kWeak:
      return "weak";
  }
  return "unknown";
}

std::optional<SolverKind> ParseSolverLabel(std::string_view label) {
  for (SolverKind kind : kAllSolvers) {
    if (SolverLabel(kind) == label) return kind;
  }
  return std::nullopt;
}

std::span<const SolverKind> AllSolvers() { return kAllSolvers; }

std::size_t MinimumPoints(SolverKind kind) {
  return kind == SolverKind::kDlt ? 6 : 4;
}

SolveReport Solve(SolverKind kind, const CorrespondenceSet& corr,
                  const CameraIntrinsics& intr, const SolverContext& context) {
  EpnpOptions options;
  options.control_points = context.control_points;
  options.origin_index = context.origin_index;
  switch (kind) {
    case SolverKind::kDlt:
      return SolveDlt(corr, intr);
    case SolverKind::kWeak:
      return SolveWeakPerspective(corr, intr, context.origin_index);
    case SolverKind::kEpnp:
      options.refine = false;
      break;
    case SolverKind::kEpnpGn:
      break;
    case SolverKind::kParallel:
      options.initializer = Initializer::kParaperspective;
      break;
    case SolverKind::kParallelWeight:
      options.initializer = Initializer::kParaperspective;
      options.weighting = Weighting::kErrorTransfer;
      break;
  }
  return SolveEpnp(corr, intr, options);
}

}  // namespace ppnp
