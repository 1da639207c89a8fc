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

#include "ppnp/error_transfer.h"

#include <cmath>
#include <sstream>

#include "ppnp/error.h"

namespace ppnp {
namespace {

constexpr double kTrigEpsilon = 1e-12;

double SinBeta(const SegmentGeometry& g) {
  return std::hypot(g.d_pi.x(), g.d_pi.y()) / g.d_io;
}

double CosBeta(const SegmentGeometry& g) { return g.d_pi.z() / g.d_io; }

void RequireSegment(const SegmentGeometry& g) {
  if (!(g.d_io > 0.0) || !(g.tz > 0.0)) {
    Fail(ErrorCode::kDomain, "segment geometry needs d_io > 0 and t_z > 0");
  }
}

[[noreturn]] void DomainFailure(const char* ratio, const SegmentGeometry& g) {
  std::ostringstream msg;
  msg << ratio << " is undefined at beta = " << g.beta_deg << " deg";
  Fail(ErrorCode::kDomain, msg.str());
}

}  // namespace

PlanarErrorRatios ComputePlanarErrorRatios(double cell_size_a, double focal_f,
                                           double depth_d, double spacing_l,
                                           double pitch_deg, double tilt_deg) {
  if (!(cell_size_a > 0.0) || !(focal_f > 0.0) || !(depth_d > 0.0) ||
      !(spacing_l > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "planar error model needs positive a, f, d and l");
  }
  const double base = cell_size_a / (2.0 * focal_f);
  const double ratio = depth_d / spacing_l;
  PlanarErrorRatios out;
  out.azimuth = base * ratio;
  out.pitch = base * ratio * ratio * std::cos(DegToRad(pitch_deg));
  out.tilt = base * ratio * ratio * std::cos(DegToRad(tilt_deg));
  return out;
}

SegmentGeometry ComputeSegmentGeometry(const Eigen::Vector3d& origin_world,
                                       const Eigen::Vector3d& point_world,
                                       const RigidPose& pose) {
  const Eigen::Vector3d c0 = pose.Apply(origin_world);
  const Eigen::Vector3d ci = pose.Apply(point_world);
  if (!(c0.z() > 0.0) || !(ci.z() > 0.0)) {
    Fail(ErrorCode::kBehindCamera, "segment endpoint is behind the camera");
  }
  SegmentGeometry g;
  g.tz = c0.z();
  g.origin_norm = Eigen::Vector2d(c0.x() / c0.z(), c0.y() / c0.z());
  g.d_pi = ci - c0;
  g.d_io = g.d_pi.norm();
  if (!(g.d_io > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "segment has zero length");
  }
  g.u_ix = (g.d_pi.x() - g.origin_norm.x() * g.d_pi.z()) / g.tz;
  g.v_ix = (g.d_pi.y() - g.origin_norm.y() * g.d_pi.z()) / g.tz;
  g.m_io = std::hypot(g.u_ix, g.v_ix);
  g.m_o = g.origin_norm.norm();
  g.beta_deg =
      RadToDeg(std::atan2(std::hypot(g.d_pi.x(), g.d_pi.y()), g.d_pi.z()));
  return g;
}

double SegmentTransverseSq(const SegmentGeometry& g) {
  const double s = g.d_io * std::sin(DegToRad(g.beta_deg));
  return s * s;
}

double SegmentTransverseSqFromImage(const SegmentGeometry& g) {
  const double dz = g.d_pi.z();
  return g.tz * g.tz * g.m_io * g.m_io + g.m_o * g.m_o * dz * dz +
         2.0 * (g.u_ix * g.origin_norm.x() + g.v_ix * g.origin_norm.y()) *
             g.tz * dz;
}

double SegmentTransverseSqVariance(const SegmentGeometry& g, double sigma_m_io,
                                   double sigma_m_o, double sigma_u_ix,
                                   double sigma_v_ix) {
  const double dz = g.d_pi.z();
  const double d_mio = 2.0 * g.tz * g.tz * g.m_io;
  const double d_mo = 2.0 * dz * dz * g.m_o;
  const double d_uix = 2.0 * g.origin_norm.x() * g.tz * dz;
  const double d_vix = 2.0 * g.origin_norm.y() * g.tz * dz;
  return d_mio * d_mio * sigma_m_io * sigma_m_io +
         d_mo * d_mo * sigma_m_o * sigma_m_o +
         d_uix * d_uix * sigma_u_ix * sigma_u_ix +
         d_vix * d_vix * sigma_v_ix * sigma_v_ix;
}

LengthErrorRatios ComputeLengthErrorRatios(const SegmentGeometry& g) {
  RequireSegment(g);
  const double s = SinBeta(g);
  double c = CosBeta(g);
  if (!(s > kTrigEpsilon)) DomainFailure("d_wrt_mio", g);
  if (c < 0.0 && c > -kTrigEpsilon) c = 0.0;
  if (c < 0.0) DomainFailure("d_wrt_beta", g);
  const double dz = g.d_pi.z();
  LengthErrorRatios r;
  r.d_wrt_mio = g.tz * g.tz * g.m_io / (g.d_io * s * s);
  r.d_wrt_mo = dz * dz * g.m_o / (g.d_io * s * s);
  r.d_wrt_beta = g.d_io * std::sqrt(c) / s;
  return r;
}

AngleErrorRatios ComputeAngleErrorRatios(const SegmentGeometry& g) {
  RequireSegment(g);
  const double s = SinBeta(g);
  const double c = CosBeta(g);
  if (!(s > kTrigEpsilon) || !(c > kTrigEpsilon)) {
    DomainFailure("beta_wrt_mio", g);
  }
  const double denom = g.d_io * g.d_io * s * std::sqrt(c);
  const double dz = g.d_pi.z();
  AngleErrorRatios r;
  r.beta_wrt_mio = g.tz * g.tz * g.m_io / denom;
  r.beta_wrt_mo = dz * dz * g.m_o / denom;
  return r;
}

ErrorRatios ComputeSegmentErrorRatios(const SegmentGeometry& g) {
  return {ComputeLengthErrorRatios(g), ComputeAngleErrorRatios(g)};
}

double AngleSensitivityFactor(double beta_deg) {
  const double b = DegToRad(beta_deg);
  return 1.0 / (std::sin(b) * std::sqrt(std::cos(b)));
}

PairWeights ComputeRawGnWeights(const ControlPoints& control_world,
                                const RigidPose& coarse_pose) {
  const Eigen::Vector3d& t = coarse_pose.translation;
  if (!(t.z() > 0.0)) {
    Fail(ErrorCode::kBehindCamera, "target origin is behind the camera");
  }
  const Eigen::Vector2d origin_norm = t.head<2>() / t.z();
  const double m_o = std::max(origin_norm.norm(), kWeightClamp);
  // Segment lengths use the same paraperspective image offsets as the
  // segment error model, so they stay defined for any control point.
  std::array<Eigen::Vector3d, 4> cam;
  for (int j = 0; j < 4; ++j) cam[j] = coarse_pose.Apply(control_world[j]);
  PairWeights w;
  for (std::size_t p = 0; p < kControlPairs.size(); ++p) {
    const auto [i, j] = kControlPairs[p];
    const double d_sq = (control_world[i] - control_world[j]).squaredNorm();
    const Eigen::Vector3d d = cam[j] - cam[i];
    const double m_ij = std::max(
        (d.head<2>() - origin_norm * d.z()).norm() / t.z(), kWeightClamp);
    w[p] = d_sq / (t.z() * t.z() * m_o * m_ij);
  }
  return w;
}

PairWeights ComputeGnWeights(const ControlPoints& control_world,
                             const RigidPose& coarse_pose) {
  PairWeights w = ComputeRawGnWeights(control_world, coarse_pose);
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(w.size());
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    Fail(ErrorCode::kNumericalFailure, "Gauss-Newton weights degenerate");
  }
  for (double& v : w) v /= mean;
  return w;
}

}  // namespace ppnp
