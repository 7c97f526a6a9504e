#include "vp4l/pose_dh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vp4l {
namespace {

constexpr double kLevelSpread = 1e-6;

// Relabelings of a cyclic quad: 4 rotations, each optionally reversed.
constexpr std::array<std::array<int, 4>, 8> kCyclicBijections{{
    {0, 1, 2, 3}, {0, 3, 2, 1}, {1, 0, 3, 2}, {1, 2, 3, 0},
    {2, 1, 0, 3}, {2, 3, 0, 1}, {3, 0, 1, 2}, {3, 2, 1, 0},
}};

using CornerQr = Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 4, 3>>;

Eigen::Matrix<double, 4, 3> corner_matrix(std::span<const Vec3, 4> vertices_c) {
  Eigen::Matrix<double, 4, 3> a;
  for (int i = 0; i < 4; ++i) a.row(i) = vertices_c[i].transpose();
  return a;
}

CRowFit fit_with(const Eigen::Matrix<double, 4, 3>& a, const CornerQr& qr,
                 std::span<const double, 4> heights_w, double t_z,
                 const std::array<int, 4>& bijection) {
  Eigen::Vector4d b;
  for (int i = 0; i < 4; ++i) b[i] = heights_w[bijection[i]] - t_z;
  const Vec3 c = qr.solve(b);
  CRowFit fit;
  fit.bijection = bijection;
  fit.residual = (a * c - b).norm();
  fit.raw_norm = c.norm();
  if (!(fit.raw_norm > 0.0)) {
    throw Error(ErrorKind::SingularConfiguration, "height row vanishes");
  }
  fit.c = c / fit.raw_norm;
  if (fit.c.z() < 0.0) fit.c = -fit.c;
  return fit;
}

const CornerQr& checked(const CornerQr& qr) {
  if (qr.rank() < 3) {
    throw Error(ErrorKind::SingularConfiguration, "camera-frame corners are rank deficient");
  }
  return qr;
}

}  // namespace

void DhSearchConfig::validate() const {
  if (!(eps2 > 0.0 && eps2 < eps1 && eps1 < max_height)) {
    throw Error(ErrorKind::ConfigError, "height search needs 0 < eps2 < eps1 < max_height");
  }
  if (stages < 1) throw Error(ErrorKind::ConfigError, "height search needs at least one stage");
  if (!(max_camera_tilt_deg > 0.0 && max_camera_tilt_deg <= 90.0)) {
    throw Error(ErrorKind::ConfigError, "camera tilt bound must lie in (0, 90] degrees");
  }
}

CRowFit solve_c_row(std::span<const Vec3, 4> vertices_c,
                    std::span<const double, 4> heights_w, double t_z) {
  const Eigen::Matrix<double, 4, 3> a = corner_matrix(vertices_c);
  const CornerQr qr(a);
  checked(qr);

  std::array<int, 4> perm{0, 1, 2, 3};
  double best_score = std::numeric_limits<double>::infinity();
  std::array<int, 4> best_perm = perm;
  do {
    Eigen::Vector4d b;
    for (int i = 0; i < 4; ++i) b[i] = heights_w[perm[i]] - t_z;
    const Vec3 c = qr.solve(b);
    const double score = (a * c - b).norm() + std::abs(c.norm() - 1.0);
    if (score < best_score) {
      best_score = score;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return fit_with(a, qr, heights_w, t_z, best_perm);
}

CRowFit fit_c_row(std::span<const Vec3, 4> vertices_c, std::span<const double, 4> heights_w,
                  double t_z, const std::array<int, 4>& bijection) {
  const Eigen::Matrix<double, 4, 3> a = corner_matrix(vertices_c);
  const CornerQr qr(a);
  return fit_with(a, checked(qr), heights_w, t_z, bijection);
}

TiltAngles euler_xy_from_c(const Vec3& c) {
  return {std::atan2(c.y(), c.z()), -std::asin(std::clamp(c.x(), -1.0, 1.0))};
}

HeightObjectiveSample solve_pose_2d(const LuminaireCcsEstimate& ccs,
                                    const LuminaireSpec& spec, double t_z,
                                    double heading_hint) {
  const std::span<const Vec3, 4> pc(ccs.vertices);
  std::array<double, 4> heights;
  for (std::size_t i = 0; i < 4; ++i) heights[i] = spec.vertices()[i].z();
  const Eigen::Matrix<double, 4, 3> a = corner_matrix(pc);
  const CornerQr qr(a);
  checked(qr);

  HeightObjectiveSample out;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& bijection : kCyclicBijections) {
    const CRowFit fit = fit_with(a, qr, heights, t_z, bijection);
    const TiltAngles tilt = euler_xy_from_c(fit.c);
    const PlanarSolution planar = resolve_correspondence(pc, spec, tilt, heading_hint);

    HeightObjectiveSample s;
    s.t_z = t_z;
    s.bijection = bijection;
    s.pose.euler = {tilt.phi, tilt.theta, planar.psi};
    s.pose.rotation = rotation_from_euler(s.pose.euler);
    s.pose.translation = {planar.t_x, planar.t_y, t_z};
    s.pose.residual = planar.residual;
    Vec3 n_est = s.pose.rotation * ccs.normal;
    if (n_est.z() < 0.0) n_est = -n_est;
    s.delta_g = (spec.normal() - n_est).norm();
    s.camera_tilt = std::acos(std::clamp(s.pose.rotation(2, 2), -1.0, 1.0));

    const double score = s.delta_g + fit.residual + std::abs(fit.raw_norm - 1.0);
    if (score < best_score) {
      best_score = score;
      out = s;
    }
  }
  return out;
}

HeightObjectiveSample solve_pose_2d(std::span<const PixelPoint, 4> corners,
                                    const LuminaireSpec& spec,
                                    const CameraIntrinsics& k, double t_z,
                                    double heading_hint) {
  return solve_pose_2d(estimate_luminaire_ccs(corners, spec.area(), k), spec, t_z,
                       heading_hint);
}

DhResult solve_pose_dh(const LuminaireCcsEstimate& ccs, const LuminaireSpec& spec,
                       const DhSearchConfig& cfg, double heading_hint) {
  cfg.validate();
  if (spec.height_spread() < kLevelSpread) {
    throw Error(ErrorKind::DegenerateObjective,
                "luminaire is level; the height objective carries no information");
  }

  double lowest = std::numeric_limits<double>::infinity();
  for (const Vec3& v : spec.vertices()) lowest = std::min(lowest, v.z());
  if (!(lowest > 0.0)) {
    throw Error(ErrorKind::ConfigError, "luminaire lies below the height search range");
  }
  // The camera faces up at the luminaire, so it sits below every corner.
  auto in_range = [&](double t_z) { return t_z >= 0.0 && t_z <= cfg.max_height && t_z < lowest; };

  const double max_tilt = cfg.max_camera_tilt_deg * std::numbers::pi / 180.0;
  DhResult out;
  auto evaluate = [&](double t_z) -> const HeightObjectiveSample& {
    HeightObjectiveSample s = solve_pose_2d(ccs, spec, t_z, heading_hint);
    s.feasible = s.camera_tilt <= max_tilt;
    out.samples.push_back(s);
    return out.samples.back();
  };

  // Stage 1: t_z in {0, eps1, ..., max_height}.
  const int n = static_cast<int>(std::floor(cfg.max_height / cfg.eps1 + 1e-9));
  HeightObjectiveSample best;
  best.delta_g = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i <= n && in_range(i * cfg.eps1); ++i) {
    const HeightObjectiveSample& s = evaluate(i * cfg.eps1);
    if (!s.feasible) continue;
    lo = std::min(lo, s.delta_g);
    hi = std::max(hi, s.delta_g);
    if (s.delta_g < best.delta_g) best = s;
  }
  if (lo > hi) {
    throw Error(ErrorKind::DegenerateObjective, "no height in the search range faces the camera up");
  }
  if (hi - lo < 1e-9) {
    throw Error(ErrorKind::DegenerateObjective, "height objective is flat over the search range");
  }
  out.stage_best.push_back(best.delta_g);

  // Stage k: refine within one previous cell either side of the incumbent.
  double prev_step = cfg.eps1;
  double step = cfg.eps2;
  for (int stage = 2; stage <= cfg.stages; ++stage) {
    const double center = best.t_z;
    const int count = static_cast<int>(std::lround(2.0 * prev_step / step));
    for (int j = 1; j < count; ++j) {
      const double t_z = center - prev_step + j * step;
      if (!in_range(t_z)) continue;
      const HeightObjectiveSample& s = evaluate(t_z);
      if (s.feasible && s.delta_g < best.delta_g) best = s;
    }
    out.stage_best.push_back(best.delta_g);
    prev_step = step;
    step *= cfg.eps2 / cfg.eps1;
  }

  out.pose = best.pose;
  out.delta_g = best.delta_g;
  return out;
}

DhResult solve_pose_dh(std::span<const PixelPoint, 4> corners,
                       const LuminaireSpec& spec, const CameraIntrinsics& k,
                       const DhSearchConfig& cfg, double heading_hint) {
  if (spec.height_spread() < kLevelSpread) {
    throw Error(ErrorKind::DegenerateObjective,
                "luminaire is level; the height objective carries no information");
  }
  return solve_pose_dh(estimate_luminaire_ccs(corners, spec.area(), k), spec, cfg,
                       heading_hint);
}

}  // namespace vp4l
