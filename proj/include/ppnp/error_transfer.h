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

#include <Eigen/Core>

#include "ppnp/epnp.h"
#include "ppnp/geometry.h"

namespace ppnp {

// Error ratios for a planar four-point target (sigma_angle / sigma_pixel).
struct PlanarErrorRatios {
  double azimuth = 0.0;  // sigma_gamma / sigma_p
  double pitch = 0.0;    // sigma_theta / sigma_p
  double tilt = 0.0;     // sigma_phi / sigma_p
};

// a: cell size, f: focal length (both mm), d: target distance, l: point
// spacing, pitch/tilt in degrees.
PlanarErrorRatios ComputePlanarErrorRatios(double cell_size_a, double focal_f,
                                           double depth_d, double spacing_l,
                                           double pitch_deg, double tilt_deg);

// Geometry of the segment P0 -> Pi under a pose, in the paraperspective
// frame of the target origin P0. All normalised quantities are unit-focal
// image coordinates.
struct SegmentGeometry {
  double d_io = 0.0;      // |P0 Pi| in mm
  double m_io = 0.0;      // projected segment length
  double m_o = 0.0;       // distance of the projected origin from the axis
  double beta_deg = 0.0;  // angle between P0 Pi and the optical axis
  double tz = 0.0;        // depth of P0
  Eigen::Vector2d origin_norm = Eigen::Vector2d::Zero();  // (x0, y0)
  Eigen::Vector3d d_pi = Eigen::Vector3d::Zero();  // (d_pix, d_piy, d_piz)
  double u_ix = 0.0;
  double v_ix = 0.0;
};

// u_ix, v_ix are the paraperspective image offsets of Pi relative to P0,
// i.e. t_z u_ix = d_pix - x0 d_piz (and likewise for v).
SegmentGeometry ComputeSegmentGeometry(const Eigen::Vector3d& origin_world,
                                       const Eigen::Vector3d& point_world,
                                       const RigidPose& pose);

// (d_io sin(beta))^2 evaluated from the segment directly ...
double SegmentTransverseSq(const SegmentGeometry& g);
// ... and from the image-plane measurements:
// t_z^2 m_io^2 + m_o^2 d_piz^2 + 2 (u_ix x0 + v_ix y0) t_z d_piz.
double SegmentTransverseSqFromImage(const SegmentGeometry& g);

// First-order variance of SegmentTransverseSqFromImage for independent
// perturbations of m_io, m_o, u_ix and v_ix.
double SegmentTransverseSqVariance(const SegmentGeometry& g, double sigma_m_io,
                                   double sigma_m_o, double sigma_u_ix,
                                   double sigma_v_ix);

struct LengthErrorRatios {
  double d_wrt_mio = 0.0;
  double d_wrt_mo = 0.0;
  double d_wrt_beta = 0.0;
};

struct AngleErrorRatios {
  double beta_wrt_mio = 0.0;
  double beta_wrt_mo = 0.0;
};

struct ErrorRatios {
  LengthErrorRatios length;
  AngleErrorRatios angle;
};

// Segment-length sensitivities. Requires 0 < beta <= 90 degrees (sin > 0 and
// cos >= 0); throws kDomain naming the undefined ratio otherwise.
LengthErrorRatios ComputeLengthErrorRatios(const SegmentGeometry& g);

// Segment-angle sensitivities. Requires 0 < beta < 90 degrees.
AngleErrorRatios ComputeAngleErrorRatios(const SegmentGeometry& g);

ErrorRatios ComputeSegmentErrorRatios(const SegmentGeometry& g);

// 1 / (sin(beta) sqrt(cos(beta))), the angular factor of the angle ratios.
double AngleSensitivityFactor(double beta_deg);

// Angle in (0, 90) degrees minimising AngleSensitivityFactor, i.e.
// atan(sqrt(2)).
inline constexpr double kOptimalSegmentAngleDeg = 54.735610317245346;

inline constexpr double kWeightClamp = 1e-6;

// Per-pair Gauss-Newton weights d_ij^2 / (t_z^2 m_o m_ij) evaluated under a
// coarse pose and normalised to unit mean. m_ij is the paraperspective image
// length of segment C_i C_j. m_o and m_ij below kWeightClamp are clamped.
// Throws kBehindCamera if the target origin is not in front of the camera.
PairWeights ComputeGnWeights(const ControlPoints& control_world,
                             const RigidPose& coarse_pose);

// Unnormalised weights, same order as kControlPairs.
PairWeights ComputeRawGnWeights(const ControlPoints& control_world,
                                const RigidPose& coarse_pose);

}  // namespace ppnp
