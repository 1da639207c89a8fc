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
#include <span>
#include <string_view>

#include "ppnp/epnp.h"
#include "ppnp/geometry.h"

namespace ppnp {

enum class Weighting { kNone, kErrorTransfer };

struct EpnpOptions {
  Initializer initializer = Initializer::kEpnpClosedForm;
  bool refine = true;
  Weighting weighting = Weighting::kNone;
  ControlPointMode control_points = ControlPointMode::CentroidPca();
  // Reference point for the weak/paraperspective initializers.
  std::optional<std::size_t> origin_index;
  // Geometric initializers also refine the closed-form start and keep the
  // candidate with the lower reprojection RMS.
  bool compare_closed_form = true;
};

// Control frame -> initial betas -> optional (weighted) Gauss-Newton ->
// pose. For the error-transfer weighting the weights are evaluated once,
// under the pose produced by the initializer.
SolveReport SolveEpnp(const CorrespondenceSet& corr,
                      const CameraIntrinsics& intr,
                      const EpnpOptions& options = {});

enum class SolverKind {
  kDlt,
  kEpnp,
  kEpnpGn,
  kParallel,
  kParallelWeight,
  kWeak,
};

std::string_view SolverLabel(SolverKind kind);
std::optional<SolverKind> ParseSolverLabel(std::string_view label);
std::span<const SolverKind> AllSolvers();

// Minimum number of correspondences the solver accepts.
std::size_t MinimumPoints(SolverKind kind);

struct SolverContext {
  ControlPointMode control_points = ControlPointMode::CentroidPca();
  std::optional<std::size_t> origin_index;
};

SolveReport Solve(SolverKind kind, const CorrespondenceSet& corr,
                  const CameraIntrinsics& intr,
                  const SolverContext& context = {});

}  // namespace ppnp
