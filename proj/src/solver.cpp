#include "vp4l/solver.hpp"

namespace vp4l {

std::string_view to_string(SolverMode mode) noexcept {
  switch (mode) {
    case SolverMode::Auto: return "auto";
    case SolverMode::Basic: return "basic";
    case SolverMode::Dh: return "dh";
  }
  return "unknown";
}

bool is_level(const LuminaireSpec& spec) { return spec.height_spread() < 1e-6; }

Solution solve_pose(std::span<const PixelPoint, 4> corners, const LuminaireSpec& spec,
                    const CameraIntrinsics& k, const SolveOptions& opts) {
  SolverMode mode = opts.mode;
  if (mode == SolverMode::Auto) mode = is_level(spec) ? SolverMode::Basic : SolverMode::Dh;

  const LuminaireCcsEstimate ccs = estimate_luminaire_ccs(corners, spec.area(), k);
  Solution out;
  out.used = mode;
  if (mode == SolverMode::Basic) {
    out.pose = solve_pose_sh(ccs, spec, {opts.heading_hint, false});
    if (opts.known_tz) out.pose.translation.z() = *opts.known_tz;
    return out;
  }

  if (is_level(spec)) {
    throw Error(ErrorKind::DegenerateObjective,
                "luminaire is level; the height objective carries no information");
  }
  if (opts.known_tz) {
    const HeightObjectiveSample s = solve_pose_2d(ccs, spec, *opts.known_tz, opts.heading_hint);
    out.pose = s.pose;
    out.delta_g = s.delta_g;
    return out;
  }
  const DhResult r = solve_pose_dh(ccs, spec, opts.search, opts.heading_hint);
  out.pose = r.pose;
  out.delta_g = r.delta_g;
  return out;
}

}  // namespace vp4l
