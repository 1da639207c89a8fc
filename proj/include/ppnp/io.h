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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ppnp/epnp.h"
#include "ppnp/geometry.h"

namespace ppnp {

// Text formats, one record per line, '#' comments, blank lines ignored.
//   correspondences: X Y Z u v
//   layouts:         X Y Z
// A line reading "#@ control" marks the next four records as explicit
// control points (X Y Z only) instead of observations.
inline constexpr std::string_view kControlDirective = "#@ control";

struct CorrespondenceFile {
  CorrespondenceSet corr;
  std::optional<ControlPoints> control_points;
};

struct LayoutFile {
  std::vector<Eigen::Vector3d> points;
  std::optional<ControlPoints> control_points;
};

// Parse failures throw kParse with "source:line: reason".
CorrespondenceFile ParseCorrespondences(std::istream& in,
                                        std::string_view source);
LayoutFile ParseLayout(std::istream& in, std::string_view source);
// key=value lines: fx, fy, u0, v0 and optional a (cell size), f_mm.
CameraIntrinsics ParseIntrinsics(std::istream& in, std::string_view source);

CorrespondenceFile ReadCorrespondenceFile(const std::string& path);
LayoutFile ReadLayoutFile(const std::string& path);
CameraIntrinsics ReadIntrinsicsFile(const std::string& path);

void WriteCorrespondences(std::ostream& out, const CorrespondenceFile& file);
void WriteLayout(std::ostream& out, const LayoutFile& file);
void WriteIntrinsics(std::ostream& out, const CameraIntrinsics& intr);

}  // namespace ppnp
