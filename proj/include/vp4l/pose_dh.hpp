#pragma once

// Correction solver for tilted luminaires (corners at different heights).
//
// For a hypothesized camera height t_z, the third row c of Ry*Rx follows from
// c . P_i^c = z_j^w - t_z; tilt comes from c, yaw and planar position from the
// same correspondence-free least squares as the basic solver. The height is
// the minimizer of dG(t_z) = |n_w - R(t_z) n_c|, found by coarse-to-fine grid
// search.

#include <array>
#include <span>
#include <vector>

#include "vp4l/pose_basic.hpp"

namespace vp4l {

struct DhSearchConfig {
  double max_height = 3.0;  ///< H_m, upper bound of the t_z search range
  double eps1 = 0.10;       ///< first-stage grid spacing
  double eps2 = 0.01;       ///< second-stage grid spacing
  int stages = 2;
  /// Heights whose pose tips the optical axis further than this from
  /// vertical are skipped. Rules out the mirror pose a tilted rectangle admits.
  double max_camera_tilt_deg = 60.0;

  /// Throws ConfigError unless 0 < eps2 < eps1 < max_height, stages >= 1 and
  /// 0 < max_camera_tilt_deg <= 90.
  void validate() const;
};

struct CRowFit {
  Vec3 c = Vec3::UnitZ();   ///< unit, c.z() > 0
  double raw_norm = 1.0;    ///< |c| before renormalization
  double residual = 0.0;
  std::array<int, 4> bijection{0, 1, 2, 3};  ///< camera corner i -> world corner bijection[i]
};

struct HeightObjectiveSample {
  double t_z = 0.0;
  double delta_g = 0.0;
  std::array<int, 4> bijection{0, 1, 2, 3};  ///< c-row pairing that won at this height
  double camera_tilt = 0.0;                  ///< optical axis from vertical, radians
  bool feasible = true;                      ///< within max_camera_tilt_deg
  PoseEstimate pose;
};

struct DhResult {
  PoseEstimate pose;
  double delta_g = 0.0;
  std::vector<HeightObjectiveSample> samples;  ///< every evaluation, in order
  std::vector<double> stage_best;              ///< incumbent objective after each stage
};

/// Enumerates all 24 corner bijections and keeps the one minimizing
/// residual + |(|c| - 1)|. Exact ties keep the lexicographically first.
CRowFit solve_c_row(std::span<const Vec3, 4> vertices_c,
                    std::span<const double, 4> heights_w, double t_z);

/// Least-squares c for one fixed pairing of camera corners to world heights.
CRowFit fit_c_row(std::span<const Vec3, 4> vertices_c, std::span<const double, 4> heights_w,
                  double t_z, const std::array<int, 4>& bijection);

TiltAngles euler_xy_from_c(const Vec3& c);

/// Pose for a known camera height, plus the normal mismatch at that height.
/// Tries the 8 pairings that keep the corners' cyclic order and keeps the one
/// minimizing dG + residual + |(|c| - 1)|. The fit score alone cannot
/// tell these apart between grid points, since all of them fit a planar
/// rectangle exactly.
HeightObjectiveSample solve_pose_2d(const LuminaireCcsEstimate& ccs,
                                    const LuminaireSpec& spec, double t_z,
                                    double heading_hint = 0.0);

HeightObjectiveSample solve_pose_2d(std::span<const PixelPoint, 4> corners,
                                    const LuminaireSpec& spec,
                                    const CameraIntrinsics& k, double t_z,
                                    double heading_hint = 0.0);

/// Heights at or above the lowest luminaire corner are skipped, and
/// infeasible samples never become the incumbent.
/// Throws DegenerateObjective when the corner heights spread by less than
/// 1e-6 m, when no first-stage sample is feasible, or when dG is flat
/// (spread < 1e-9) over the feasible first-stage samples.
DhResult solve_pose_dh(const LuminaireCcsEstimate& ccs, const LuminaireSpec& spec,
                       const DhSearchConfig& cfg, double heading_hint = 0.0);

DhResult solve_pose_dh(std::span<const PixelPoint, 4> corners,
                       const LuminaireSpec& spec, const CameraIntrinsics& k,
                       const DhSearchConfig& cfg, double heading_hint = 0.0);

}  // namespace vp4l
