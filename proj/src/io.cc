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

#include "ppnp/io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ppnp/error.h"
#include "ppnp/sim_bench.h"

namespace ppnp {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void ParseFail(std::string_view source, int line,
                            const std::string& why) {
  Fail(ErrorCode::kParse,
       std::string(source) + ":" + std::to_string(line) + ": " + why);
}

double ParseDouble(std::string_view token, std::string_view source, int line) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    ParseFail(source, line, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> Split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<double> ParseRecord(std::string_view body, std::size_t fields,
                                std::string_view source, int line) {
  const auto tokens = Split(body);
  if (tokens.size() != fields) {
    ParseFail(source, line,
              "expected " + std::to_string(fields) + " fields, got " +
                  std::to_string(tokens.size()));
  }
  std::vector<double> v;
  for (auto t : tokens) v.push_back(ParseDouble(t, source, line));
  return v;
}

// Walks the records of a point file. `on_point` receives data records,
// control-point records are collected separately.
template <typename OnPoint>
std::optional<ControlPoints> ScanPointFile(std::istream& in,
                                           std::string_view source,
                                           std::size_t fields,
                                           OnPoint on_point) {
  std::optional<ControlPoints> control;
  int pending_control = 0;
  int control_line = 0;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = Trim(raw);
    if (s == kControlDirective) {
      if (control) ParseFail(source, line, "duplicate control block");
      control.emplace();
      pending_control = 4;
      control_line = line;
      continue;
    }
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = Trim(s.substr(0, hash));
    }
    if (s.empty()) continue;
    if (pending_control > 0) {
      const auto v = ParseRecord(s, 3, source, line);
      (*control)[4 - pending_control] = Eigen::Vector3d(v[0], v[1], v[2]);
      --pending_control;
      continue;
    }
    on_point(ParseRecord(s, fields, source, line), line);
  }
  if (pending_control > 0) {
    ParseFail(source, control_line, "control block needs 4 points");
  }
  return control;
}

std::ifstream OpenOrFail(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kParse, path + ": cannot open file");
  return in;
}

void WritePoint(std::ostream& out, const Eigen::Vector3d& p) {
  out << FormatNumber(p.x()) << ' ' << FormatNumber(p.y()) << ' '
      << FormatNumber(p.z());
}

void WriteControlBlock(std::ostream& out,
                       const std::optional<ControlPoints>& control) {
  if (!control) return;
  out << kControlDirective << '\n';
  for (const auto& c : *control) {
    WritePoint(out, c);
    out << '\n';
  }
}

}  // namespace

CorrespondenceFile ParseCorrespondences(std::istream& in,
                                        std::string_view source) {
  CorrespondenceFile file;
  file.control_points =
      ScanPointFile(in, source, 5, [&](const std::vector<double>& v, int) {
        file.corr.push_back({Eigen::Vector3d(v[0], v[1], v[2]),
                             Eigen::Vector2d(v[3], v[4])});
      });
  return file;
}

LayoutFile ParseLayout(std::istream& in, std::string_view source) {
  LayoutFile file;
  file.control_points =
      ScanPointFile(in, source, 3, [&](const std::vector<double>& v, int) {
        file.points.emplace_back(v[0], v[1], v[2]);
      });
  return file;
}

CameraIntrinsics ParseIntrinsics(std::istream& in, std::string_view source) {
  CameraIntrinsics intr;
  std::optional<double> fx, fy, u0, v0;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    s = Trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) ParseFail(source, line, "expected key=value");
    const std::string_view key = Trim(s.substr(0, eq));
    const double value = ParseDouble(Trim(s.substr(eq + 1)), source, line);
    if (key == "fx") {
      fx = value;
    } else if (key == "fy") {
      fy = value;
    } else if (key == "u0") {
      u0 = value;
    } else if (key == "v0") {
      v0 = value;
    } else if (key == "a") {
      intr.cell_size = value;
    } else if (key == "f_mm") {
      intr.focal_mm = value;
    } else {
      ParseFail(source, line, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!fx || !fy || !u0 || !v0) {
    ParseFail(source, line, "fx, fy, u0 and v0 are all required");
  }
  intr.fx = *fx;
  intr.fy = *fy;
  intr.u0 = *u0;
  intr.v0 = *v0;
  try {
    intr.Validate();
  } catch (const PoseError& e) {
    Fail(ErrorCode::kParse, std::string(source) + ": " + e.what());
  }
  return intr;
}

CorrespondenceFile ReadCorrespondenceFile(const std::string& path) {
  auto in = OpenOrFail(path);
  return ParseCorrespondences(in, path);
}

LayoutFile ReadLayoutFile(const std::string& path) {
  auto in = OpenOrFail(path);
  return ParseLayout(in, path);
}

CameraIntrinsics ReadIntrinsicsFile(const std::string& path) {
  auto in = OpenOrFail(path);
  return ParseIntrinsics(in, path);
}

void WriteCorrespondences(std::ostream& out, const CorrespondenceFile& file) {
  out << "# X Y Z u v\n";
  for (const auto& c : file.corr) {
    WritePoint(out, c.world);
    out << ' ' << FormatNumber(c.pixel.x()) << ' ' << FormatNumber(c.pixel.y())
        << '\n';
  }
  WriteControlBlock(out, file.control_points);
}

void WriteLayout(std::ostream& out, const LayoutFile& file) {
  out << "# X Y Z\n";
  for (const auto& p : file.points) {
    WritePoint(out, p);
    out << '\n';
  }
  WriteControlBlock(out, file.control_points);
}

void WriteIntrinsics(std::ostream& out, const CameraIntrinsics& intr) {
  out << "fx=" << FormatNumber(intr.fx) << "\nfy=" << FormatNumber(intr.fy)
      << "\nu0=" << FormatNumber(intr.u0) << "\nv0=" << FormatNumber(intr.v0)
      << '\n';
  if (intr.cell_size) out << "a=" << FormatNumber(*intr.cell_size) << '\n';
  if (intr.focal_mm) out << "f_mm=" << FormatNumber(*intr.focal_mm) << '\n';
}

}  // namespace ppnp
