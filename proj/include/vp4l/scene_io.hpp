#pragma once

// Plain-text key/value files.
//
// A problem file holds one observation to solve:
//
//   vp4l-problem 1
//   u0 = 320
//   v0 = 240
//   focal_length = 0.004
//   f_u = 800
//   f_v = 800
//   vertex1 = 3.1 2.7 3.0        # world corners, meters, cyclic order
//   ...
//   vertex4 = ...
//   corner1 = 412.5 198.25       # pixel corners, any order
//   ...
//   corner4 = ...
//   heading_hint_rad = 0         # optional (or heading_hint_deg)
//   search = 3 0.1 0.01 2        # optional: max height, eps1, eps2, stages
//   known_height = 1.25          # optional: solve at this camera height
//   mode = dh                    # optional: auto (default), basic or dh
//   true_position = x y z        # optional, ignored by the solver
//   true_euler_rad = phi theta psi
//
// A scene file overrides SceneConfig fields by name under a
// "vp4l-scene 1" header. '#' starts a comment. Numbers are written with
// 17 significant digits so values survive a round trip exactly.

#include <iosfwd>
#include <optional>
#include <string>

#include "vp4l/simulation.hpp"

namespace vp4l {

struct Problem {
  CameraIntrinsics intrinsics{320.0, 240.0, 0.004, 800.0, 800.0};
  LuminaireSpec luminaire{{Vec3(0.6, 0.2, 3.0), Vec3(-0.6, 0.2, 3.0),
                           Vec3(-0.6, -0.2, 3.0), Vec3(0.6, -0.2, 3.0)}};
  ImageObservation observation;
  double heading_hint = 0.0;
  DhSearchConfig search;
  std::optional<double> known_height;
  SolverMode mode = SolverMode::Auto;
  std::optional<TruePose> truth;
};

/// Throws ParseError with the line number and field name on bad input.
Problem read_problem(std::istream& is);
Problem read_problem_file(const std::string& path);
void write_problem(std::ostream& os, const Problem& p);
void write_problem_file(const std::string& path, const Problem& p);

/// Builds the problem for one simulated trial: observation, hint, search
/// settings, known height when the scene uses one, the solver the trial
/// used and the true pose.
Problem problem_from_trial(const SceneConfig& cfg, const TrialResult& trial);

/// Applies the keys in `is` on top of `base`.
SceneConfig read_scene_config(std::istream& is, SceneConfig base = {});
SceneConfig read_scene_config_file(const std::string& path, SceneConfig base = {});
void write_scene_config(std::ostream& os, const SceneConfig& cfg);

}  // namespace vp4l
