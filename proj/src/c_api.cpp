#include "vp4l/vp4l.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "vp4l/scene_io.hpp"
#include "vp4l/simulation.hpp"
#include "vp4l/solver.hpp"

struct vp4l_problem {
  vp4l::Problem problem;
};

struct vp4l_experiment {
  vp4l::MonteCarloRun run;
};

namespace {

thread_local std::string g_last_error;

vp4l_status status_of(vp4l::ErrorKind kind) {
  using vp4l::ErrorKind;
  switch (kind) {
    case ErrorKind::DegenerateLine: return VP4L_ERR_DEGENERATE_LINE;
    case ErrorKind::ParallelLines: return VP4L_ERR_PARALLEL_LINES;
    case ErrorKind::BehindCamera: return VP4L_ERR_BEHIND_CAMERA;
    case ErrorKind::DegenerateQuad: return VP4L_ERR_DEGENERATE_QUAD;
    case ErrorKind::SingularConfiguration: return VP4L_ERR_SINGULAR_CONFIGURATION;
    case ErrorKind::NonPositiveVolume: return VP4L_ERR_NON_POSITIVE_VOLUME;
    case ErrorKind::HeightMismatch: return VP4L_ERR_HEIGHT_MISMATCH;
    case ErrorKind::AmbiguousSelection: return VP4L_ERR_AMBIGUOUS_SELECTION;
    case ErrorKind::DegenerateObjective: return VP4L_ERR_DEGENERATE_OBJECTIVE;
    case ErrorKind::ConfigError: return VP4L_ERR_CONFIG;
    case ErrorKind::SamplingExhausted: return VP4L_ERR_SAMPLING_EXHAUSTED;
    case ErrorKind::ParseError: return VP4L_ERR_PARSE;
    case ErrorKind::IoError: return VP4L_ERR_IO;
  }
  return VP4L_ERR_INTERNAL;
}

vp4l_status fail(vp4l_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, mapping exceptions onto status codes.
template <class Fn>
vp4l_status guarded(Fn&& fn) {
  try {
    fn();
    return VP4L_OK;
  } catch (const vp4l::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VP4L_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VP4L_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VP4L_ERR_INTERNAL, "unknown exception");
  }
}

vp4l::SolverMode to_mode(vp4l_mode m) {
  switch (m) {
    case VP4L_MODE_BASIC: return vp4l::SolverMode::Basic;
    case VP4L_MODE_DH: return vp4l::SolverMode::Dh;
    case VP4L_MODE_AUTO: break;
  }
  return vp4l::SolverMode::Auto;
}

vp4l_mode from_mode(vp4l::SolverMode m) {
  switch (m) {
    case vp4l::SolverMode::Basic: return VP4L_MODE_BASIC;
    case vp4l::SolverMode::Dh: return VP4L_MODE_DH;
    case vp4l::SolverMode::Auto: break;
  }
  return VP4L_MODE_AUTO;
}

bool valid_mode(vp4l_mode m) {
  return m == VP4L_MODE_AUTO || m == VP4L_MODE_BASIC || m == VP4L_MODE_DH;
}

vp4l::SolveOptions to_options(const vp4l_solve_options* o) {
  vp4l_solve_options d;
  vp4l_solve_options_default(&d);
  if (!o) o = &d;
  if (!valid_mode(o->mode)) throw vp4l::Error(vp4l::ErrorKind::ConfigError, "unknown solver mode");
  vp4l::SolveOptions out;
  out.mode = to_mode(o->mode);
  out.heading_hint = o->heading_hint;
  out.search = {o->max_height, o->eps1, o->eps2, o->stages};
  out.search.validate();
  if (o->has_known_height) out.known_tz = o->known_height;
  return out;
}

void fill_pose(vp4l_pose* out, const vp4l::EulerAngles& e, const vp4l::Mat3& r,
               const vp4l::Vec3& t) {
  out->phi = e.phi;
  out->theta = e.theta;
  out->psi = e.psi;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out->rotation[3 * i + j] = r(i, j);
    out->translation[i] = t(i);
  }
}

void fill_solution(vp4l_pose* out, const vp4l::Solution& s) {
  *out = {};
  fill_pose(out, s.pose.euler, s.pose.rotation, s.pose.translation);
  out->residual = s.pose.residual;
  out->delta_g = s.delta_g;
  out->mode = from_mode(s.used);
}

vp4l::SceneConfig to_scene(const vp4l_scene_config& c) {
  vp4l::SceneConfig s;
  s.room_length = c.room_length;
  s.room_width = c.room_width;
  s.room_height = c.room_height;
  s.luminaire_length = c.luminaire_length;
  s.luminaire_width = c.luminaire_width;
  s.tilt_deg = c.tilt_deg;
  s.u0 = c.u0;
  s.v0 = c.v0;
  s.focal_length = c.focal_length;
  s.f_u = c.f_u;
  s.f_v = c.f_v;
  s.image_width = c.image_width;
  s.image_height = c.image_height;
  s.noise_sigma = c.noise_sigma;
  s.images_per_position = c.images_per_position;
  s.quantize_pixels = c.quantize_pixels != 0;
  s.occlude_vertex = c.occlude_vertex;
  s.occlusion_edge_fraction = c.occlusion_edge_fraction;
  s.camera_z_min = c.camera_z_min;
  if (c.has_camera_z_max) s.camera_z_max = c.camera_z_max;
  s.max_tilt_perturbation_deg = c.max_tilt_perturbation_deg;
  s.heading_hint_error_deg = c.heading_hint_error_deg;
  s.max_sampling_attempts = c.max_sampling_attempts;
  s.known_height = c.known_height != 0;
  s.eps1 = c.eps1;
  s.eps2 = c.eps2;
  s.search_stages = c.search_stages;
  s.seed = c.seed;
  s.threads = c.threads;
  return s;
}

vp4l_scene_config from_scene(const vp4l::SceneConfig& s) {
  vp4l_scene_config c{};
  c.room_length = s.room_length;
  c.room_width = s.room_width;
  c.room_height = s.room_height;
  c.luminaire_length = s.luminaire_length;
  c.luminaire_width = s.luminaire_width;
  c.tilt_deg = s.tilt_deg;
  c.u0 = s.u0;
  c.v0 = s.v0;
  c.focal_length = s.focal_length;
  c.f_u = s.f_u;
  c.f_v = s.f_v;
  c.image_width = s.image_width;
  c.image_height = s.image_height;
  c.noise_sigma = s.noise_sigma;
  c.images_per_position = s.images_per_position;
  c.quantize_pixels = s.quantize_pixels ? 1 : 0;
  c.occlude_vertex = s.occlude_vertex;
  c.occlusion_edge_fraction = s.occlusion_edge_fraction;
  c.camera_z_min = s.camera_z_min;
  c.has_camera_z_max = s.camera_z_max.has_value() ? 1 : 0;
  c.camera_z_max = s.camera_z_max.value_or(0.0);
  c.max_tilt_perturbation_deg = s.max_tilt_perturbation_deg;
  c.heading_hint_error_deg = s.heading_hint_error_deg;
  c.max_sampling_attempts = s.max_sampling_attempts;
  c.known_height = s.known_height ? 1 : 0;
  c.eps1 = s.eps1;
  c.eps2 = s.eps2;
  c.search_stages = s.search_stages;
  c.seed = s.seed;
  c.threads = s.threads;
  return c;
}

vp4l_stats to_stats(const vp4l::Stats& s) { return {s.mean, s.median, s.std}; }
vp4l::Stats from_stats(const vp4l_stats& s) { return {s.mean, s.median, s.std}; }

}  // namespace

extern "C" {

const char* vp4l_version(void) { return "1.0.0"; }

const char* vp4l_status_string(vp4l_status status) {
  switch (status) {
    case VP4L_OK: return "ok";
    case VP4L_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case VP4L_ERR_DEGENERATE_LINE: return "degenerate_line";
    case VP4L_ERR_PARALLEL_LINES: return "parallel_lines";
    case VP4L_ERR_BEHIND_CAMERA: return "behind_camera";
    case VP4L_ERR_DEGENERATE_QUAD: return "degenerate_quad";
    case VP4L_ERR_SINGULAR_CONFIGURATION: return "singular_configuration";
    case VP4L_ERR_NON_POSITIVE_VOLUME: return "non_positive_volume";
    case VP4L_ERR_HEIGHT_MISMATCH: return "height_mismatch";
    case VP4L_ERR_AMBIGUOUS_SELECTION: return "ambiguous_selection";
    case VP4L_ERR_DEGENERATE_OBJECTIVE: return "degenerate_objective";
    case VP4L_ERR_CONFIG: return "config_error";
    case VP4L_ERR_SAMPLING_EXHAUSTED: return "sampling_exhausted";
    case VP4L_ERR_PARSE: return "parse_error";
    case VP4L_ERR_IO: return "io_error";
    case VP4L_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* vp4l_last_error_message(void) { return g_last_error.c_str(); }

const char* vp4l_mode_string(vp4l_mode mode) {
  switch (mode) {
    case VP4L_MODE_AUTO: return "auto";
    case VP4L_MODE_BASIC: return "basic";
    case VP4L_MODE_DH: return "dh";
  }
  return "unknown";
}

void vp4l_solve_options_default(vp4l_solve_options* opts) {
  if (!opts) return;
  const vp4l::DhSearchConfig d;
  *opts = {};
  opts->mode = VP4L_MODE_AUTO;
  opts->max_height = d.max_height;
  opts->eps1 = d.eps1;
  opts->eps2 = d.eps2;
  opts->stages = d.stages;
}

vp4l_status vp4l_solve(const vp4l_intrinsics* intrinsics, const double vertices[12],
                       const double corners[8], const vp4l_solve_options* opts,
                       vp4l_pose* out) {
  if (!intrinsics || !vertices || !corners || !out) {
    return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const vp4l::CameraIntrinsics k(intrinsics->u0, intrinsics->v0, intrinsics->focal_length,
                                   intrinsics->f_u, intrinsics->f_v);
    std::array<vp4l::Vec3, 4> v;
    std::array<vp4l::PixelPoint, 4> c;
    for (int i = 0; i < 4; ++i) {
      v[i] = {vertices[3 * i], vertices[3 * i + 1], vertices[3 * i + 2]};
      c[i] = {corners[2 * i], corners[2 * i + 1]};
    }
    const vp4l::LuminaireSpec spec(v);
    fill_solution(out, vp4l::solve_pose(c, spec, k, to_options(opts)));
  });
}

void vp4l_pose_errors(const vp4l_pose* truth, const vp4l_pose* estimate, double* pe,
                      double oe_deg[3]) {
  if (!truth || !estimate) return;
  const vp4l::Vec3 a(truth->translation[0], truth->translation[1], truth->translation[2]);
  const vp4l::Vec3 b(estimate->translation[0], estimate->translation[1],
                     estimate->translation[2]);
  if (pe) *pe = vp4l::position_error(a, b);
  if (oe_deg) {
    const auto oe = vp4l::orientation_errors({truth->phi, truth->theta, truth->psi},
                                             {estimate->phi, estimate->theta, estimate->psi});
    oe_deg[0] = oe.x_deg;
    oe_deg[1] = oe.y_deg;
    oe_deg[2] = oe.z_deg;
  }
}

vp4l_status vp4l_problem_load(const char* path, vp4l_problem** out) {
  if (!path || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new vp4l_problem{vp4l::read_problem_file(path)}; });
}

vp4l_status vp4l_problem_parse(const char* text, vp4l_problem** out) {
  if (!text || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::istringstream in(text);
    *out = new vp4l_problem{vp4l::read_problem(in)};
  });
}

vp4l_status vp4l_problem_save(const vp4l_problem* problem, const char* path) {
  if (!problem || !path) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { vp4l::write_problem_file(path, problem->problem); });
}

void vp4l_problem_destroy(vp4l_problem* problem) { delete problem; }

vp4l_status vp4l_problem_solve(const vp4l_problem* problem, const vp4l_solve_options* opts,
                               vp4l_pose* out) {
  if (!problem || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& p = problem->problem;
    vp4l::SolveOptions o = to_options(opts);
    o.heading_hint = p.heading_hint;
    o.search = p.search;
    if (o.mode == vp4l::SolverMode::Auto) o.mode = p.mode;
    if (!o.known_tz) o.known_tz = p.known_height;
    fill_solution(out, vp4l::solve_pose(p.observation.corners, p.luminaire, p.intrinsics, o));
  });
}

vp4l_status vp4l_problem_truth(const vp4l_problem* problem, int* has_truth, vp4l_pose* out) {
  if (!problem || !has_truth || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  *out = {};
  const auto& t = problem->problem.truth;
  *has_truth = t.has_value() ? 1 : 0;
  if (t) fill_pose(out, t->euler, t->rotation, t->translation);
  return VP4L_OK;
}

void vp4l_scene_config_default(vp4l_scene_config* cfg) {
  if (cfg) *cfg = from_scene(vp4l::SceneConfig{});
}

vp4l_status vp4l_scene_config_validate(const vp4l_scene_config* cfg) {
  if (!cfg) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { to_scene(*cfg).validate(); });
}

vp4l_status vp4l_scene_config_load(const char* path, vp4l_scene_config* cfg) {
  if (!path || !cfg) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *cfg = from_scene(vp4l::read_scene_config_file(path, to_scene(*cfg))); });
}

vp4l_status vp4l_scene_config_save(const vp4l_scene_config* cfg, const char* path) {
  if (!cfg || !path) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ostringstream os;
    vp4l::write_scene_config(os, to_scene(*cfg));
    std::FILE* f = std::fopen(path, "w");
    if (!f) throw vp4l::Error(vp4l::ErrorKind::IoError, std::string("cannot write '") + path + "'");
    const std::string s = os.str();
    const bool ok = std::fwrite(s.data(), 1, s.size(), f) == s.size();
    if (std::fclose(f) != 0 || !ok) {
      throw vp4l::Error(vp4l::ErrorKind::IoError, std::string("failed writing '") + path + "'");
    }
  });
}

vp4l_status vp4l_experiment_run(const vp4l_scene_config* cfg, int trials, vp4l_mode mode,
                                vp4l_experiment** out) {
  if (!cfg || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (trials < 1) return fail(VP4L_ERR_INVALID_ARGUMENT, "trial count must be at least 1");
  if (!valid_mode(mode)) return fail(VP4L_ERR_INVALID_ARGUMENT, "unknown solver mode");
  return guarded([&] {
    *out = new vp4l_experiment{vp4l::run_monte_carlo(to_scene(*cfg), trials, to_mode(mode))};
  });
}

void vp4l_experiment_destroy(vp4l_experiment* exp) { delete exp; }

vp4l_status vp4l_experiment_summary(const vp4l_experiment* exp, vp4l_summary* out) {
  if (!exp || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  const auto& s = exp->run.summary;
  *out = {s.trials, s.ok, s.errors, to_stats(s.pe), to_stats(s.oe_x), to_stats(s.oe_y),
          to_stats(s.oe_z)};
  return VP4L_OK;
}

int vp4l_experiment_trial_count(const vp4l_experiment* exp) {
  return exp ? static_cast<int>(exp->run.trials.size()) : 0;
}

vp4l_status vp4l_experiment_trial(const vp4l_experiment* exp, int index, vp4l_trial* out) {
  if (!exp || !out) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  if (index < 0 || index >= vp4l_experiment_trial_count(exp)) {
    return fail(VP4L_ERR_INVALID_ARGUMENT, "trial index out of range");
  }
  const vp4l::TrialResult& t = exp->run.trials[static_cast<std::size_t>(index)];
  *out = {};
  out->index = t.index;
  out->ok = t.ok() ? 1 : 0;
  std::snprintf(out->status, sizeof out->status, "%s", t.status.c_str());
  out->pe = t.pe;
  out->oe_x = t.oe.x_deg;
  out->oe_y = t.oe.y_deg;
  out->oe_z = t.oe.z_deg;
  out->heading_hint = t.heading_hint;
  for (int i = 0; i < 4; ++i) {
    out->corners[2 * i] = t.observation.corners[i].u;
    out->corners[2 * i + 1] = t.observation.corners[i].v;
  }
  fill_pose(&out->truth, t.truth.euler, t.truth.rotation, t.truth.translation);
  if (t.estimate) {
    fill_pose(&out->estimate, t.estimate->euler, t.estimate->rotation, t.estimate->translation);
    out->estimate.residual = t.estimate->residual;
    out->estimate.mode = from_mode(t.used);
  }
  return VP4L_OK;
}

vp4l_status vp4l_experiment_write_trials_csv(const vp4l_experiment* exp, const char* path) {
  if (!exp || !path) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ostringstream os;
    vp4l::write_trials_csv(os, exp->run.trials);
    std::FILE* f = std::fopen(path, "w");
    if (!f) throw vp4l::Error(vp4l::ErrorKind::IoError, std::string("cannot write '") + path + "'");
    const std::string s = os.str();
    const bool ok = std::fwrite(s.data(), 1, s.size(), f) == s.size();
    if (std::fclose(f) != 0 || !ok) {
      throw vp4l::Error(vp4l::ErrorKind::IoError, std::string("failed writing '") + path + "'");
    }
  });
}

vp4l_status vp4l_experiment_write_trial_problem(const vp4l_experiment* exp, int index,
                                                const char* path) {
  if (!exp || !path) return fail(VP4L_ERR_INVALID_ARGUMENT, "null argument");
  if (index < 0 || index >= vp4l_experiment_trial_count(exp)) {
    return fail(VP4L_ERR_INVALID_ARGUMENT, "trial index out of range");
  }
  return guarded([&] {
    const auto& t = exp->run.trials[static_cast<std::size_t>(index)];
    if (t.status == "sampling_exhausted") {
      throw vp4l::Error(vp4l::ErrorKind::SamplingExhausted, "trial has no observation");
    }
    vp4l::write_problem_file(path, vp4l::problem_from_trial(exp->run.config, t));
  });
}

const char* vp4l_summary_csv_header(void) {
  static const std::string header = vp4l::summary_csv_header();
  return header.c_str();
}

size_t vp4l_summary_csv_row(const char* sweep, double value, vp4l_mode mode,
                            const vp4l_summary* summary, char* buf, size_t cap) {
  if (!sweep || !summary) return 0;
  vp4l::MonteCarloSummary s;
  s.trials = summary->trials;
  s.ok = summary->ok;
  s.errors = summary->errors;
  s.pe = from_stats(summary->pe);
  s.oe_x = from_stats(summary->oe_x);
  s.oe_y = from_stats(summary->oe_y);
  s.oe_z = from_stats(summary->oe_z);
  const std::string row = vp4l::summary_csv_row(sweep, value, to_mode(mode), s);
  if (buf && cap > 0) {
    const size_t n = row.size() < cap - 1 ? row.size() : cap - 1;
    std::memcpy(buf, row.data(), n);
    buf[n] = '\0';
  }
  return row.size();
}

}  // extern "C"
