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

#include "ppnp/epnp.h"
#include "ppnp/geometry.h"

namespace ppnp {

// Linear resection of [R|t] from intrinsics-normalised observations (n >= 6,
// non-coplanar), projected onto SE(3).
SolveReport SolveDlt(const CorrespondenceSet& corr,
                     const CameraIntrinsics& intr);

// Scaled-orthographic pose about a reference point: every point shares the
// reference depth.
RigidPose WeakPerspectivePose(const CorrespondenceSet& corr,
                              const CameraIntrinsics& intr,
                              std::optional<std::size_t> origin_index =
                                  std::nullopt);

SolveReport SolveWeakPerspective(const CorrespondenceSet& corr,
                                 const CameraIntrinsics& intr,
                                 std::optional<std::size_t> origin_index =
                                     std::nullopt);

}  // namespace ppnp
