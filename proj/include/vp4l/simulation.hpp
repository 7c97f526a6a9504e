#pragma once

// Synthetic scenes, noisy observations and Monte Carlo accuracy runs.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vp4l/solver.hpp"

namespace vp4l {

using Rng = std::mt19937_64;

struct SceneConfig {
  double room_length = 5.0;
  double room_width = 5.0;
  double room_height = 3.0;
  double luminaire_length = 1.2;  ///< along world x before tilt
  double luminaire_width = 0.4;   ///< along world y
  double tilt_deg = 0.0;          ///< about the luminaire's central y-parallel axis

  double u0 = 320.0, v0 = 240.0;
  double focal_length = 0.004;
  double f_u = 800.0, f_v = 800.0;
  int image_width = 640;
  int image_height = 480;

  double noise_sigma = 2.0;  ///< pixels, per image and axis
  int images_per_position = 20;
  bool quantize_pixels = false;
  int occlude_vertex = 0;  ///< 1..4 world corner to hide, 0 for none
  double occlusion_edge_fraction = 0.5;

  double camera_z_min = 0.0;
  std::optional<double> camera_z_max;  ///< defaults to room_height - 0.5
  double max_tilt_perturbation_deg = 15.0;
  double heading_hint_error_deg = 45.0;
  int max_sampling_attempts = 100000;

  bool known_height = false;
  double eps1 = 0.10;
  double eps2 = 0.01;
  int search_stages = 2;

  std::uint64_t seed = 20240601;
  int threads = 0;  ///< 0 picks hardware concurrency

  /// Throws ConfigError on invalid values.
  void validate() const;
  CameraIntrinsics intrinsics() const;
  DhSearchConfig search() const;
  double camera_z_upper() const;
};

struct TruePose {
  EulerAngles euler;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
};

struct ImageObservation {
  std::array<PixelPoint, 4> corners;
};

struct OrientationErrors {
  double x_deg = 0.0;
  double y_deg = 0.0;
  double z_deg = 0.0;
};

struct TrialResult {
  int index = 0;
  TruePose truth;
  std::optional<PoseEstimate> estimate;
  SolverMode used = SolverMode::Basic;
  double heading_hint = 0.0;
  ImageObservation observation;
  double pe = 0.0;
  OrientationErrors oe;
  std::string status = "ok";  ///< "ok" or an ErrorKind name

  bool ok() const { return status == "ok"; }
};

struct Stats {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  ///< population standard deviation
};

struct MonteCarloSummary {
  int trials = 0;
  int ok = 0;
  int errors = 0;
  Stats pe;
  Stats oe_x, oe_y, oe_z;
};

struct MonteCarloRun {
  SceneConfig config;
  SolverMode mode = SolverMode::Auto;
  std::vector<TrialResult> trials;
  MonteCarloSummary summary;
};

/// Rectangle centered at (room_length/2, room_width/2, room_height), long
/// side along x, rotated by tilt about its central y-parallel axis so the +x
/// edge rises. Throws ConfigError if it leaves the room horizontally, dips
/// below the floor, or tilt is outside [0, 90).
LuminaireSpec make_scene(const SceneConfig& cfg);

/// Uniform position, upward-facing orientation with bounded tilt and uniform
/// yaw, rejected until all four corners project inside the image frame.
/// Throws SamplingExhausted after cfg.max_sampling_attempts draws.
TruePose sample_pose(const SceneConfig& cfg, const LuminaireSpec& spec, Rng& rng);

/// Averages images_per_position noisy projections of each corner. An
/// occluded corner is rebuilt from its two adjacent edge lines. The output
/// order is shuffled.
ImageObservation observe(const LuminaireSpec& spec, const TruePose& pose,
                         const SceneConfig& cfg, Rng& rng);

/// Intersection of the image lines (a, a_edge) and (b, b_edge), in pixels.
PixelPoint reconstruct_corner(const PixelPoint& a, const PixelPoint& a_edge,
                              const PixelPoint& b, const PixelPoint& b_edge,
                              const CameraIntrinsics& k);

double position_error(const Vec3& true_t, const Vec3& est_t);
OrientationErrors orientation_errors(const EulerAngles& truth, const EulerAngles& est);

/// Independent stream for one trial, derived from (seed, trial index).
Rng trial_rng(std::uint64_t seed, int trial);

TrialResult run_trial(const SceneConfig& cfg, const LuminaireSpec& spec, int index,
                      SolverMode mode);

MonteCarloSummary summarize(std::span<const TrialResult> trials);

/// Deterministic for a given (cfg, n_trials, mode) regardless of thread count.
MonteCarloRun run_monte_carlo(const SceneConfig& cfg, int n_trials, SolverMode mode);

/// Columns: trial,status,pe_m,oe_x_deg,oe_y_deg,oe_z_deg,tz_true,tz_est,residual
void write_trials_csv(std::ostream& os, std::span<const TrialResult> trials);

std::string summary_csv_header();
std::string summary_csv_row(std::string_view sweep, double value, SolverMode mode,
                            const MonteCarloSummary& s);

/// Decimal rendering used by every CSV column ("%.9g", "nan" for NaN).
std::string format_number(double v);

}  // namespace vp4l
