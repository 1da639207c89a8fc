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

#include "ppnp/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppnp/error.h"
#include "ppnp/error_transfer.h"
#include "ppnp/io.h"
#include "ppnp/paraperspective.h"
#include "ppnp/sim_bench.h"
#include "ppnp/solver.h"

namespace ppnp {
namespace {

// Half width of the reported band around the optimal segment angle.
constexpr double kOptimumBandDeg = 5.0;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kConfiguration:
      return kExitUsage;
    default:
      return kExitSolver;
  }
}

std::string Join(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::string s;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) s += ' ';
    s += FormatNumber(v(k));
  }
  return s;
}

struct SolveArgs {
  std::string corr_path;
  std::string intrinsics_path;
  std::string solver = "parallel-weight";
  std::optional<std::size_t> origin_index;
};

int CmdSolve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = ParseSolverLabel(a.solver);
  if (!kind) {
    err << "unknown solver '" << a.solver << "'\n";
    return kExitUsage;
  }
  const CameraIntrinsics intr = ReadIntrinsicsFile(a.intrinsics_path);
  const CorrespondenceFile file = ReadCorrespondenceFile(a.corr_path);
  SolverContext ctx;
  if (file.control_points) {
    ctx.control_points = ControlPointMode::Explicit(*file.control_points);
  }
  ctx.origin_index = a.origin_index;
  const SolveReport rep = Solve(*kind, file.corr, intr, ctx);
  const EulerZxz e = RotationToEulerZxz(rep.pose.rotation);
  Eigen::Matrix<double, 9, 1> r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(3 * i + j) = rep.pose.rotation(i, j);
  }
  out << "solver=" << a.solver << '\n'
      << "rotation=" << Join(r) << '\n'
      << "translation=" << Join(rep.pose.translation) << '\n'
      << "euler_zxz_deg=" << FormatNumber(e.alpha_deg) << ' '
      << FormatNumber(e.beta_deg) << ' ' << FormatNumber(e.theta_deg) << '\n'
      << "reprojection_rms_px=" << FormatNumber(rep.reprojection_rms) << '\n'
      << "initializer=" << InitializerName(rep.initializer) << '\n'
      << "gn_iterations=" << rep.gn_iterations << '\n'
      << "weighted=" << (rep.weighted ? "true" : "false") << '\n'
      << "points=" << file.corr.size() << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string protocol;
  std::string out_path;
  std::uint64_t seed = 0;
  std::optional<int> trials;
  std::vector<double> sweep;
  std::vector<std::string> solvers;
  std::optional<int> n_points;
  std::optional<std::string> target;
  std::optional<double> l;
  std::optional<double> noise;
  std::optional<double> depth;
  std::optional<std::string> intrinsics_path;
  int workers = 1;
};

int CmdSimulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const auto protocol = ParseProtocol(a.protocol);
  if (!protocol) {
    err << "unknown protocol '" << a.protocol << "'\n";
    return kExitUsage;
  }
  std::vector<SolverKind> solvers;
  for (const auto& label : a.solvers) {
    const auto kind = ParseSolverLabel(label);
    if (!kind) {
      err << "unknown solver '" << label << "'\n";
      return kExitUsage;
    }
    solvers.push_back(*kind);
  }
  if (solvers.empty()) {
    for (SolverKind k : AllSolvers()) {
      if (k != SolverKind::kWeak) solvers.push_back(k);
    }
  }
  ExperimentOverrides ov;
  ov.trials = a.trials;
  if (!a.sweep.empty()) ov.sweep = a.sweep;
  ov.n_points = a.n_points;
  if (a.target) {
    if (*a.target == "biprism") {
      ov.target = TargetKind::kBiprism;
    } else if (*a.target == "cloud") {
      ov.target = TargetKind::kRandomCloud;
    } else {
      err << "unknown target '" << *a.target << "'\n";
      return kExitUsage;
    }
  }
  ov.biprism_l = a.l;
  ov.noise_sigma = a.noise;
  ov.depth = a.depth;
  if (a.intrinsics_path) ov.intrinsics = ReadIntrinsicsFile(*a.intrinsics_path);
  ov.workers = a.workers;

  const ExperimentResult result = RunExperiment(*protocol, ov, solvers, a.seed);
  std::ofstream csv(a.out_path);
  if (!csv) {
    err << a.out_path << ": cannot open for writing\n";
    return kExitUsage;
  }
  WriteCsv(csv, result);
  std::filesystem::path meta_path(a.out_path);
  meta_path.replace_extension(".meta");
  std::ofstream meta(meta_path);
  WriteMetadata(meta, result);
  out << "wrote " << result.rows.size() << " rows to " << a.out_path << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string intrinsics_path;
  std::string layout_path;
  double depth = 0.0;
  std::vector<double> euler{0.0, 0.0, 0.0};
  std::vector<double> offset{0.0, 0.0};
  std::optional<double> a;
  std::optional<double> f;
  std::optional<double> spacing;
  double pitch = 0.0;
  double tilt = 0.0;
};

int CmdPredict(const PredictArgs& a, std::ostream& out, std::ostream&) {
  const CameraIntrinsics intr = ReadIntrinsicsFile(a.intrinsics_path);
  const LayoutFile layout = ReadLayoutFile(a.layout_path);
  if (!(a.depth > 0.0)) Fail(ErrorCode::kDomain, "depth must be positive");
  RigidPose pose;
  pose.rotation = EulerZxzToRotation(a.euler[0], a.euler[1], a.euler[2]);
  pose.translation = Eigen::Vector3d(a.offset[0], a.offset[1], a.depth);
  const Eigen::Vector3d origin = Eigen::Vector3d::Zero();

  out << "depth=" << FormatNumber(a.depth) << '\n'
      << "optimal_beta_deg=" << FormatNumber(kOptimalSegmentAngleDeg) << '\n';
  int index = 0;
  for (const auto& p : layout.points) {
    ++index;
    if (p.norm() == 0.0) continue;  // the origin itself has no segment
    const SegmentGeometry g = ComputeSegmentGeometry(origin, p, pose);
    out << "segment=" << index << " d_io=" << FormatNumber(g.d_io)
        << " m_io=" << FormatNumber(g.m_io) << " m_o=" << FormatNumber(g.m_o)
        << " beta_deg=" << FormatNumber(g.beta_deg)
        << " tz=" << FormatNumber(g.tz);
    try {
      const LengthErrorRatios r = ComputeLengthErrorRatios(g);
      out << " d_wrt_mio=" << FormatNumber(r.d_wrt_mio)
          << " d_wrt_mo=" << FormatNumber(r.d_wrt_mo)
          << " d_wrt_beta=" << FormatNumber(r.d_wrt_beta);
    } catch (const PoseError& e) {
      if (e.code() != ErrorCode::kDomain) throw;
      out << " d_wrt_mio=out-of-domain d_wrt_mo=out-of-domain"
             " d_wrt_beta=out-of-domain";
    }
    try {
      const AngleErrorRatios r = ComputeAngleErrorRatios(g);
      out << " beta_wrt_mio=" << FormatNumber(r.beta_wrt_mio)
          << " beta_wrt_mo=" << FormatNumber(r.beta_wrt_mo);
    } catch (const PoseError& e) {
      if (e.code() != ErrorCode::kDomain) throw;
      out << " beta_wrt_mio=out-of-domain beta_wrt_mo=out-of-domain";
    }
    const bool in_band =
        std::abs(g.beta_deg - kOptimalSegmentAngleDeg) <= kOptimumBandDeg ||
        std::abs(180.0 - g.beta_deg - kOptimalSegmentAngleDeg) <=
            kOptimumBandDeg;
    out << " optimum_band=" << (in_band ? "yes" : "no") << '\n';
  }

  const std::optional<double> cell = a.a ? a.a : intr.cell_size;
  const std::optional<double> focal = a.f ? a.f : intr.focal_mm;
  if (cell && focal && a.spacing) {
    const PlanarErrorRatios pr = ComputePlanarErrorRatios(
        *cell, *focal, a.depth, *a.spacing, a.pitch, a.tilt);
    out << "planar sigma_gamma_ratio=" << FormatNumber(pr.azimuth)
        << " sigma_theta_ratio=" << FormatNumber(pr.pitch)
        << " sigma_phi_ratio=" << FormatNumber(pr.tilt) << '\n';
  }
  return kExitOk;
}

struct TargetArgs {
  double l = 0.0;
  std::optional<std::string> out_path;
};

int CmdTarget(const TargetArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.l > 0.0) || !std::isfinite(a.l)) {
    err << "--L must be a positive length\n";
    return kExitUsage;
  }
  const BiprismTarget t = MakeBiprismTarget(a.l);
  LayoutFile file{t.points, t.control_points};
  if (a.out_path) {
    std::ofstream f(*a.out_path);
    if (!f) {
      err << *a.out_path << ": cannot open for writing\n";
      return kExitUsage;
    }
    WriteLayout(f, file);
  } else {
    WriteLayout(out, file);
  }
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Paraperspective-initialized weighted EPnP pose tools", "ppnp"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "estimate a pose");
  solve_cmd->add_option("--corr", solve.corr_path, "X Y Z u v file")->required();
  solve_cmd->add_option("--intrinsics", solve.intrinsics_path)->required();
  solve_cmd->add_option("--solver", solve.solver,
                        "dlt|epnp|epnp-gn|parallel|parallel-weight|weak");
  solve_cmd->add_option("--origin-index", solve.origin_index,
                        "reference point for the affine initializers");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run an experiment sweep");
  sim_cmd->add_option("--protocol", sim.protocol,
                      "feature_count|noise|timing|depth_ratio|off_axis|angle")
      ->required();
  sim_cmd->add_option("--out", sim.out_path, "CSV path")->required();
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--trials", sim.trials);
  sim_cmd->add_option("--sweep", sim.sweep, "comma separated grid")
      ->delimiter(',');
  sim_cmd->add_option("--solvers", sim.solvers, "comma separated labels")
      ->delimiter(',');
  sim_cmd->add_option("--n-points", sim.n_points);
  sim_cmd->add_option("--target", sim.target, "cloud|biprism");
  sim_cmd->add_option("--L", sim.l, "biprism size (mm)");
  sim_cmd->add_option("--noise", sim.noise, "pixel sigma");
  sim_cmd->add_option("--depth", sim.depth, "off-axis origin depth (mm)");
  sim_cmd->add_option("--intrinsics", sim.intrinsics_path);
  sim_cmd->add_option("--workers", sim.workers)->check(CLI::PositiveNumber);

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "error budget of a layout");
  pred_cmd->add_option("--intrinsics", pred.intrinsics_path)->required();
  pred_cmd->add_option("--layout", pred.layout_path)->required();
  pred_cmd->add_option("--depth", pred.depth, "origin depth (mm)")->required();
  pred_cmd->add_option("--euler", pred.euler, "alpha,beta,theta (deg)")
      ->delimiter(',')
      ->expected(3);
  pred_cmd->add_option("--offset", pred.offset, "origin x,y (mm)")
      ->delimiter(',')
      ->expected(2);
  pred_cmd->add_option("--a", pred.a, "pixel cell size (mm)");
  pred_cmd->add_option("--f", pred.f, "focal length (mm)");
  pred_cmd->add_option("--spacing", pred.spacing, "planar point spacing (mm)");
  pred_cmd->add_option("--pitch", pred.pitch, "deg");
  pred_cmd->add_option("--tilt", pred.tilt, "deg");

  TargetArgs target;
  auto* target_cmd = app.add_subcommand("target", "write the biprism layout");
  target_cmd->add_option("--L", target.l, "vertex distance (mm)")->required();
  target_cmd->add_option("--out", target.out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return CmdSolve(solve, out, err);
    if (*sim_cmd) return CmdSimulate(sim, out, err);
    if (*pred_cmd) return CmdPredict(pred, out, err);
    if (*target_cmd) return CmdTarget(target, out, err);
  } catch (const PoseError& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << '\n';
    return ExitCodeFor(e.code());
  }
  return kExitUsage;
}

}  // namespace ppnp
