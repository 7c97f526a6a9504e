#include "vp4l/pose_basic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace vp4l {
namespace {

constexpr double kRectTol = 1e-9;

// World pairs (i, j), i < j, in the fixed group order used everywhere.
constexpr std::array<std::array<int, 2>, 6> kWorldPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

LuminaireSpec::LuminaireSpec(const std::array<Vec3, 4>& vertices_w)
    : vertices_(vertices_w) {
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw Error(ErrorKind::ConfigError, "luminaire vertex is not finite");
  }
  const Vec3 e01 = vertices_[1] - vertices_[0];
  const Vec3 e12 = vertices_[2] - vertices_[1];
  const Vec3 e23 = vertices_[3] - vertices_[2];
  const Vec3 e30 = vertices_[0] - vertices_[3];
  const double a = e01.norm(), b = e12.norm();
  if (!(a > kRectTol && b > kRectTol)) {
    throw Error(ErrorKind::ConfigError, "luminaire has a degenerate side");
  }
  if (std::abs(a - e23.norm()) > kRectTol || std::abs(b - e30.norm()) > kRectTol) {
    throw Error(ErrorKind::ConfigError, "luminaire opposite sides differ in length");
  }
  if (std::abs(e01.dot(e12)) / (a * b) > kRectTol ||
      std::abs(e12.dot(e23)) / (a * b) > kRectTol) {
    throw Error(ErrorKind::ConfigError, "luminaire corners are not right angles");
  }
  if ((e01 + e23).norm() > kRectTol) {
    throw Error(ErrorKind::ConfigError, "luminaire vertices are not in cyclic order");
  }
  Vec3 n = (vertices_[0] - vertices_[1]).cross(vertices_[0] - vertices_[3]);
  area_ = a * b;
  n.normalize();
  if (n.z() < 0.0) n = -n;
  normal_ = n;
}

Vec3 LuminaireSpec::center() const {
  return (vertices_[0] + vertices_[1] + vertices_[2] + vertices_[3]) / 4.0;
}

double LuminaireSpec::height_spread() const {
  double lo = vertices_[0].z(), hi = lo;
  for (const auto& v : vertices_) {
    lo = std::min(lo, v.z());
    hi = std::max(hi, v.z());
  }
  return hi - lo;
}

TiltAngles euler_xy_from_normal(const Vec3& n_c) {
  return {std::atan2(n_c.y(), n_c.z()), -std::asin(std::clamp(n_c.x(), -1.0, 1.0))};
}

LlsBlock build_lls_row(const Vec3& p_c, double phi, double theta) {
  const Mat3 yx = rotation_y(theta) * rotation_x(phi);
  const double ap = yx.row(0).dot(p_c);
  const double bp = yx.row(1).dot(p_c);
  LlsBlock a;
  a << ap, -bp, 1.0, 0.0,
       bp, ap, 0.0, 1.0;
  return a;
}

LlsCandidate solve_candidate(const Mat4& a, const Vec4& b) {
  const Eigen::PartialPivLU<Mat4> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    throw Error(ErrorKind::SingularConfiguration,
                "correspondence system is singular (condition > 1e12)");
  }
  LlsCandidate c;
  c.x = lu.solve(b);
  c.residual = (a * c.x - b).norm();
  return c;
}

PlanarSolution resolve_correspondence(std::span<const Vec3, 4> vertices_c,
                                      const LuminaireSpec& spec, TiltAngles tilt,
                                      double heading_hint) {
  std::array<LlsBlock, 4> rows;
  for (std::size_t r = 0; r < 4; ++r) {
    rows[r] = build_lls_row(vertices_c[r], tilt.phi, tilt.theta);
  }
  const auto& w = spec.vertices();

  constexpr int kPerGroup = 12;
  PlanarSolution out;
  out.candidates.reserve(6 * kPerGroup);
  for (const auto& [i, j] : kWorldPairs) {
    const Vec4 b(w[i].x(), w[i].y(), w[j].x(), w[j].y());
    for (int r = 0; r < 4; ++r) {
      for (int s = 0; s < 4; ++s) {
        if (r == s) continue;
        Mat4 a;
        a.topRows<2>() = rows[r];
        a.bottomRows<2>() = rows[s];
        LlsCandidate c = solve_candidate(a, b);
        c.r = r;
        c.s = s;
        c.i = i;
        c.j = j;
        out.candidates.push_back(c);
      }
    }
  }

  auto nearest_in_group = [&](int g, const Vec4& x) {
    std::size_t best = g * kPerGroup;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = g * kPerGroup; k < std::size_t(g + 1) * kPerGroup; ++k) {
      const double d = (out.candidates[k].x - x).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return std::pair{best, std::sqrt(best_d)};
  };

  auto pick_anchor = [&](bool use_hint) {
    std::size_t anchor = out.candidates.size();
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.candidates.size(); ++k) {
      const Vec4& x = out.candidates[k].x;
      if (use_hint && !(std::cos(std::atan2(x[1], x[0]) - heading_hint) > 0.0)) continue;
      double score = 0.0;
      for (int g = 0; g < 6 && score < best_score; ++g) score += nearest_in_group(g, x).second;
      if (score < best_score) {
        best_score = score;
        anchor = k;
      }
    }
    return anchor;
  };

  std::size_t anchor = pick_anchor(true);
  if (anchor == out.candidates.size()) anchor = pick_anchor(false);
  const Vec4 anchor_x = out.candidates[anchor].x;

  Vec4 mean = Vec4::Zero();
  for (int g = 0; g < 6; ++g) {
    out.representatives[g] = out.candidates[nearest_in_group(g, anchor_x).first];
    mean += out.representatives[g].x;
  }
  mean /= 6.0;

  double sq = 0.0;
  for (const auto& rep : out.representatives) {
    Mat4 a;
    a.topRows<2>() = rows[rep.r];
    a.bottomRows<2>() = rows[rep.s];
    const Vec4 b(w[rep.i].x(), w[rep.i].y(), w[rep.j].x(), w[rep.j].y());
    sq += (a * mean - b).squaredNorm();
  }

  out.psi = std::atan2(mean[1], mean[0]);
  out.t_x = mean[2];
  out.t_y = mean[3];
  out.residual = std::sqrt(sq / 6.0);
  return out;
}

double solve_tz(std::span<const Vec3, 4> vertices_c, const LuminaireSpec& spec,
                TiltAngles tilt, bool require_level) {
  if (require_level && spec.height_spread() > 1e-9) {
    throw Error(ErrorKind::HeightMismatch,
                "luminaire corners are not at one height; use the correction solver");
  }
  const Vec3 c = (rotation_y(tilt.theta) * rotation_x(tilt.phi)).row(2).transpose();
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += spec.vertices()[i].z() - c.dot(vertices_c[i]);
  return sum / 4.0;
}

PoseEstimate solve_pose_sh(const LuminaireCcsEstimate& ccs, const LuminaireSpec& spec,
                           const BasicOptions& opts) {
  if (opts.require_level && spec.height_spread() > 1e-9) {
    throw Error(ErrorKind::HeightMismatch,
                "luminaire corners are not at one height; use the correction solver");
  }
  const std::span<const Vec3, 4> pc(ccs.vertices);
  const TiltAngles tilt = euler_xy_from_normal(ccs.normal);
  const PlanarSolution planar = resolve_correspondence(pc, spec, tilt, opts.heading_hint);

  PoseEstimate est;
  est.euler = {tilt.phi, tilt.theta, planar.psi};
  est.rotation = rotation_from_euler(est.euler);
  est.translation = {planar.t_x, planar.t_y, solve_tz(pc, spec, tilt, false)};
  est.residual = planar.residual;
  return est;
}

PoseEstimate solve_pose_sh(std::span<const PixelPoint, 4> corners,
                           const LuminaireSpec& spec, const CameraIntrinsics& k,
                           const BasicOptions& opts) {
  if (opts.require_level && spec.height_spread() > 1e-9) {
    throw Error(ErrorKind::HeightMismatch,
                "luminaire corners are not at one height; use the correction solver");
  }
  return solve_pose_sh(estimate_luminaire_ccs(corners, spec.area(), k), spec, opts);
}

}  // namespace vp4l
