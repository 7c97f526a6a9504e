#pragma once

// Basic pose solver for luminaires whose corners share one height: tilt from
// the luminaire normal, yaw and planar position by correspondence-free linear
// least squares, height by averaging.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vp4l/geometry.hpp"
#include "vp4l/luminaire_ccs.hpp"

namespace vp4l {

using Vec4 = Eigen::Vector4d;
using LlsBlock = Eigen::Matrix<double, 2, 4>;
using Mat4 = Eigen::Matrix4d;

/// World-frame luminaire geometry, as broadcast over the light link.
class LuminaireSpec {
 public:
  /// Vertices must be a rectangle in cyclic order. Throws ConfigError
  /// otherwise (side mismatch or corner angle off by more than 1e-9).
  explicit LuminaireSpec(const std::array<Vec3, 4>& vertices_w);

  const std::array<Vec3, 4>& vertices() const { return vertices_; }
  double area() const { return area_; }
  /// Unit normal with positive z component.
  const Vec3& normal() const { return normal_; }
  Vec3 center() const;
  /// max z - min z over the four vertices.
  double height_spread() const;

 private:
  std::array<Vec3, 4> vertices_;
  double area_ = 0.0;
  Vec3 normal_;
};

struct PoseEstimate {
  EulerAngles euler;
  Mat3 rotation = Mat3::Identity();  ///< R_c^w
  Vec3 translation = Vec3::Zero();   ///< camera position in the world frame
  double residual = 0.0;
};

/// One pairing of camera-frame corners (r, s) with world corners (i, j).
/// Indices are 0-based; i < j, r != s.
struct LlsCandidate {
  int r = 0, s = 0, i = 0, j = 0;
  Vec4 x = Vec4::Zero();  ///< (cos psi, sin psi, t_x, t_y)
  double residual = 0.0;
};

struct TiltAngles {
  double phi = 0.0;
  double theta = 0.0;
};

struct PlanarSolution {
  double psi = 0.0;
  double t_x = 0.0;
  double t_y = 0.0;
  double residual = 0.0;
  std::vector<LlsCandidate> candidates;          ///< all 72, grouped by (i, j)
  std::array<LlsCandidate, 6> representatives;   ///< one per world pair
};

/// Tilt of a camera whose luminaire's world normal is vertical.
TiltAngles euler_xy_from_normal(const Vec3& n_c);

/// Rows of A_r for camera-frame corner P_c under tilt (phi, theta).
LlsBlock build_lls_row(const Vec3& p_c, double phi, double theta);

/// Least-squares solve of a stacked 4x4 system. Throws
/// SingularConfiguration when the condition number exceeds 1e12.
LlsCandidate solve_candidate(const Mat4& a, const Vec4& b);

/// Resolves yaw and planar position without known correspondences.
///
/// For every world pair (i, j), i < j, all 12 ordered camera pairs (r, s) are
/// solved. The anchor is the candidate whose summed distance to the nearest
/// candidate of every group is smallest; only candidates whose yaw lies within
/// 90 degrees of `heading_hint` may anchor, which selects between the two
/// poses a 180-degree-symmetric rectangle cannot distinguish. Each group
/// contributes its candidate nearest the anchor and the six are averaged.
PlanarSolution resolve_correspondence(std::span<const Vec3, 4> vertices_c,
                                      const LuminaireSpec& spec, TiltAngles tilt,
                                      double heading_hint = 0.0);

/// t_z by averaging z_i^w - c . P_i^c, c the third row of Ry*Rx.
/// Throws HeightMismatch if `require_level` and the corner heights spread
/// by more than 1e-9 m.
double solve_tz(std::span<const Vec3, 4> vertices_c, const LuminaireSpec& spec,
                TiltAngles tilt, bool require_level = true);

struct BasicOptions {
  double heading_hint = 0.0;
  /// When false, a tilted luminaire is treated as level (reproduces the
  /// degradation of the basic solver on tilted scenes).
  bool require_level = true;
};

PoseEstimate solve_pose_sh(std::span<const PixelPoint, 4> corners,
                           const LuminaireSpec& spec, const CameraIntrinsics& k,
                           const BasicOptions& opts = {});

/// Same pipeline starting from an already-recovered camera-frame estimate.
PoseEstimate solve_pose_sh(const LuminaireCcsEstimate& ccs,
                           const LuminaireSpec& spec, const BasicOptions& opts = {});

}  // namespace vp4l
