#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "vp4l/pose_dh.hpp"

namespace vp4l {

enum class SolverMode {
  Auto,   ///< basic for a level luminaire, correction otherwise
  Basic,  ///< basic solver, treating any luminaire as level
  Dh,     ///< correction solver; fails on a level luminaire
};

std::string_view to_string(SolverMode mode) noexcept;

struct SolveOptions {
  SolverMode mode = SolverMode::Auto;
  double heading_hint = 0.0;
  DhSearchConfig search;
  /// Known camera height (2D localization). Basic: replaces the estimated
  /// t_z. Correction: evaluates the pose at this height only.
  std::optional<double> known_tz;
};

struct Solution {
  PoseEstimate pose;
  SolverMode used = SolverMode::Basic;
  double delta_g = 0.0;  ///< normal mismatch; 0 for the basic solver
};

/// Luminaires whose corner heights spread by less than 1e-6 m count as level.
bool is_level(const LuminaireSpec& spec);

Solution solve_pose(std::span<const PixelPoint, 4> corners, const LuminaireSpec& spec,
                    const CameraIntrinsics& k, const SolveOptions& opts = {});

}  // namespace vp4l
