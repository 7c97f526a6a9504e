#include "vp4l/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace vp4l {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Stats stats_of(std::vector<double> v) {
  Stats s;
  if (v.empty()) return {kNaN, kNaN, kNaN};
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(v.size()));
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return s;
}

bool in_frame(const PixelPoint& p, const SceneConfig& cfg) {
  return p.u >= 0.0 && p.u <= cfg.image_width && p.v >= 0.0 && p.v <= cfg.image_height;
}

PixelPoint noisy_mean(const PixelPoint& p, const SceneConfig& cfg, Rng& rng) {
  if (cfg.noise_sigma == 0.0 && !cfg.quantize_pixels) return p;
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
  double su = 0.0, sv = 0.0;
  for (int i = 0; i < cfg.images_per_position; ++i) {
    double u = p.u, v = p.v;
    if (cfg.noise_sigma > 0.0) {
      u += noise(rng);
      v += noise(rng);
    }
    if (cfg.quantize_pixels) {
      u = std::round(u);
      v = std::round(v);
    }
    su += u;
    sv += v;
  }
  return {su / cfg.images_per_position, sv / cfg.images_per_position};
}

}  // namespace

void SceneConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(room_length) || !positive(room_width) || !positive(room_height)) {
    throw Error(ErrorKind::ConfigError, "room dimensions must be positive");
  }
  if (!positive(luminaire_length) || !positive(luminaire_width)) {
    throw Error(ErrorKind::ConfigError, "luminaire dimensions must be positive");
  }
  if (!(tilt_deg >= 0.0 && tilt_deg < 90.0)) {
    throw Error(ErrorKind::ConfigError, "tilt must lie in [0, 90) degrees");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorKind::ConfigError, "noise sigma must be non-negative");
  }
  if (images_per_position < 1) {
    throw Error(ErrorKind::ConfigError, "images per position must be at least 1");
  }
  if (occlude_vertex < 0 || occlude_vertex > 4) {
    throw Error(ErrorKind::ConfigError, "occluded vertex must be 1..4 (0 for none)");
  }
  if (!(occlusion_edge_fraction > 0.0 && occlusion_edge_fraction < 1.0)) {
    throw Error(ErrorKind::ConfigError, "occlusion edge fraction must lie in (0, 1)");
  }
  if (image_width < 1 || image_height < 1) {
    throw Error(ErrorKind::ConfigError, "image size must be positive");
  }
  if (!(camera_z_min >= 0.0) || !(camera_z_upper() > camera_z_min)) {
    throw Error(ErrorKind::ConfigError, "camera height band is empty");
  }
  if (!(max_tilt_perturbation_deg >= 0.0 && max_tilt_perturbation_deg < 90.0)) {
    throw Error(ErrorKind::ConfigError, "tilt perturbation must lie in [0, 90) degrees");
  }
  if (!(heading_hint_error_deg >= 0.0 && heading_hint_error_deg < 90.0)) {
    throw Error(ErrorKind::ConfigError, "heading hint error must lie in [0, 90) degrees");
  }
  if (max_sampling_attempts < 1) {
    throw Error(ErrorKind::ConfigError, "sampling attempts must be at least 1");
  }
  intrinsics();
  search().validate();
}

CameraIntrinsics SceneConfig::intrinsics() const {
  return {u0, v0, focal_length, f_u, f_v};
}

DhSearchConfig SceneConfig::search() const {
  return {room_height, eps1, eps2, search_stages};
}

double SceneConfig::camera_z_upper() const {
  return camera_z_max.value_or(room_height - 0.5);
}

LuminaireSpec make_scene(const SceneConfig& cfg) {
  cfg.validate();
  const double a = cfg.luminaire_length / 2.0;
  const double b = cfg.luminaire_width / 2.0;
  const double tilt = cfg.tilt_deg * kDeg;
  const Vec3 center(cfg.room_length / 2.0, cfg.room_width / 2.0, cfg.room_height);

  const std::array<std::array<double, 2>, 4> local = {{{a, b}, {-a, b}, {-a, -b}, {a, -b}}};
  std::array<Vec3, 4> v;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [x, y] = local[i];
    v[i] = center + Vec3(x * std::cos(tilt), y, x * std::sin(tilt));
  }
  for (const auto& p : v) {
    if (p.x() < 0.0 || p.x() > cfg.room_length || p.y() < 0.0 || p.y() > cfg.room_width) {
      throw Error(ErrorKind::ConfigError, "luminaire does not fit inside the room");
    }
    if (!(p.z() > 0.0)) throw Error(ErrorKind::ConfigError, "luminaire dips below the floor");
  }
  return LuminaireSpec(v);
}

TruePose sample_pose(const SceneConfig& cfg, const LuminaireSpec& spec, Rng& rng) {
  const CameraIntrinsics k = cfg.intrinsics();
  std::uniform_real_distribution<double> ux(0.0, cfg.room_length);
  std::uniform_real_distribution<double> uy(0.0, cfg.room_width);
  std::uniform_real_distribution<double> uz(cfg.camera_z_min, cfg.camera_z_upper());
  const double tilt_max = cfg.max_tilt_perturbation_deg * kDeg;
  std::uniform_real_distribution<double> utilt(-tilt_max, tilt_max);
  std::uniform_real_distribution<double> uyaw(-std::numbers::pi, std::numbers::pi);

  for (int attempt = 0; attempt < cfg.max_sampling_attempts; ++attempt) {
    TruePose pose;
    pose.translation = {ux(rng), uy(rng), uz(rng)};
    pose.euler.phi = utilt(rng);
    pose.euler.theta = utilt(rng);
    pose.euler.psi = uyaw(rng);
    pose.rotation = rotation_from_euler(pose.euler);

    bool ok = true;
    for (const auto& p_w : spec.vertices()) {
      const Vec3 p_c = pose.rotation.transpose() * (p_w - pose.translation);
      if (!(p_c.z() > k.f()) ||
          !in_frame(project_vertex(p_w, pose.rotation, pose.translation, k), cfg)) {
        ok = false;
        break;
      }
    }
    if (ok) return pose;
  }
  throw Error(ErrorKind::SamplingExhausted, "no camera pose imaged the whole luminaire");
}

PixelPoint reconstruct_corner(const PixelPoint& a, const PixelPoint& a_edge,
                              const PixelPoint& b, const PixelPoint& b_edge,
                              const CameraIntrinsics& k) {
  const Line2D la = line_through(pixel_to_image(a, k), pixel_to_image(a_edge, k));
  const Line2D lb = line_through(pixel_to_image(b, k), pixel_to_image(b_edge, k));
  return image_to_pixel(intersect_lines(la, lb), k);
}

ImageObservation observe(const LuminaireSpec& spec, const TruePose& pose,
                         const SceneConfig& cfg, Rng& rng) {
  const CameraIntrinsics k = cfg.intrinsics();
  const auto& v = spec.vertices();
  ImageObservation obs;
  for (std::size_t i = 0; i < 4; ++i) {
    obs.corners[i] = project_vertex(v[i], pose.rotation, pose.translation, k);
  }
  for (auto& c : obs.corners) c = noisy_mean(c, cfg, rng);

  if (cfg.occlude_vertex != 0) {
    const std::size_t hidden = static_cast<std::size_t>(cfg.occlude_vertex - 1);
    const std::size_t prev = (hidden + 3) % 4;
    const std::size_t next = (hidden + 1) % 4;
    const double frac = cfg.occlusion_edge_fraction;
    auto edge_point = [&](std::size_t from) {
      const Vec3 p = v[from] + frac * (v[hidden] - v[from]);
      return noisy_mean(project_vertex(p, pose.rotation, pose.translation, k), cfg, rng);
    };
    const PixelPoint e_prev = edge_point(prev);
    const PixelPoint e_next = edge_point(next);
    obs.corners[hidden] =
        reconstruct_corner(obs.corners[prev], e_prev, obs.corners[next], e_next, k);
  }

  for (std::size_t i = 3; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(obs.corners[i], obs.corners[pick(rng)]);
  }
  return obs;
}

double position_error(const Vec3& true_t, const Vec3& est_t) {
  return (true_t - est_t).norm();
}

OrientationErrors orientation_errors(const EulerAngles& truth, const EulerAngles& est) {
  auto err = [](double a, double b) { return std::abs(wrap_angle(a - b)) / kDeg; };
  return {err(truth.phi, est.phi), err(truth.theta, est.theta), err(truth.psi, est.psi)};
}

Rng trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

TrialResult run_trial(const SceneConfig& cfg, const LuminaireSpec& spec, int index,
                      SolverMode mode) {
  TrialResult r;
  r.index = index;
  r.pe = kNaN;
  r.oe = {kNaN, kNaN, kNaN};
  Rng rng = trial_rng(cfg.seed, index);
  try {
    r.truth = sample_pose(cfg, spec, rng);
    r.observation = observe(spec, r.truth, cfg, rng);
    const double e = cfg.heading_hint_error_deg * kDeg;
    std::uniform_real_distribution<double> hint_err(-e, e);
    r.heading_hint = wrap_angle(r.truth.euler.psi + hint_err(rng));

    SolveOptions opts;
    opts.mode = mode;
    opts.heading_hint = r.heading_hint;
    opts.search = cfg.search();
    if (cfg.known_height) opts.known_tz = r.truth.translation.z();
    const Solution sol = solve_pose(r.observation.corners, spec, cfg.intrinsics(), opts);
    r.estimate = sol.pose;
    r.used = sol.used;
    r.pe = position_error(r.truth.translation, sol.pose.translation);
    r.oe = orientation_errors(r.truth.euler, sol.pose.euler);
    r.status = "ok";
  } catch (const Error& e) {
    r.status = std::string(to_string(e.kind()));
    r.estimate.reset();
  }
  return r;
}

MonteCarloSummary summarize(std::span<const TrialResult> trials) {
  MonteCarloSummary s;
  s.trials = static_cast<int>(trials.size());
  std::vector<double> pe, ox, oy, oz;
  for (const auto& t : trials) {
    if (!t.ok()) {
      ++s.errors;
      continue;
    }
    ++s.ok;
    pe.push_back(t.pe);
    ox.push_back(t.oe.x_deg);
    oy.push_back(t.oe.y_deg);
    oz.push_back(t.oe.z_deg);
  }
  s.pe = stats_of(std::move(pe));
  s.oe_x = stats_of(std::move(ox));
  s.oe_y = stats_of(std::move(oy));
  s.oe_z = stats_of(std::move(oz));
  return s;
}

MonteCarloRun run_monte_carlo(const SceneConfig& cfg, int n_trials, SolverMode mode) {
  if (n_trials < 1) throw Error(ErrorKind::ConfigError, "trial count must be at least 1");
  const LuminaireSpec spec = make_scene(cfg);

  MonteCarloRun run;
  run.config = cfg;
  run.mode = mode;
  run.trials.resize(static_cast<std::size_t>(n_trials));

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_trials));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n_trials; i = next++) {
      run.trials[static_cast<std::size_t>(i)] = run_trial(cfg, spec, i, mode);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  run.summary = summarize(run.trials);
  return run;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trials_csv(std::ostream& os, std::span<const TrialResult> trials) {
  os << "trial,status,pe_m,oe_x_deg,oe_y_deg,oe_z_deg,tz_true,tz_est,residual\n";
  for (const auto& t : trials) {
    const bool has = t.estimate.has_value();
    const bool sampled = t.ok() || t.status != "sampling_exhausted";
    os << t.index << ',' << t.status << ',' << format_number(t.pe) << ','
       << format_number(t.oe.x_deg) << ',' << format_number(t.oe.y_deg) << ','
       << format_number(t.oe.z_deg) << ','
       << format_number(sampled ? t.truth.translation.z() : kNaN) << ','
       << format_number(has ? t.estimate->translation.z() : kNaN) << ','
       << format_number(has ? t.estimate->residual : kNaN) << '\n';
  }
}

std::string summary_csv_header() {
  return "sweep,value,mode,trials,ok,errors,pe_mean_m,pe_median_m,pe_std_m,"
         "oe_x_mean_deg,oe_x_median_deg,oe_x_std_deg,"
         "oe_y_mean_deg,oe_y_median_deg,oe_y_std_deg,"
         "oe_z_mean_deg,oe_z_median_deg,oe_z_std_deg";
}

std::string summary_csv_row(std::string_view sweep, double value, SolverMode mode,
                            const MonteCarloSummary& s) {
  std::string row;
  row += sweep;
  row += ',' + format_number(value);
  row += ',';
  row += mode == SolverMode::Basic ? "basic-forced" : std::string(to_string(mode));
  row += ',' + std::to_string(s.trials) + ',' + std::to_string(s.ok) + ',' +
         std::to_string(s.errors);
  for (const Stats* st : {&s.pe, &s.oe_x, &s.oe_y, &s.oe_z}) {
    row += ',' + format_number(st->mean);
    row += ',' + format_number(st->median);
    row += ',' + format_number(st->std);
  }
  return row;
}

}  // namespace vp4l
