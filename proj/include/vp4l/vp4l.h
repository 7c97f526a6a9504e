#ifndef VP4L_VP4L_H
#define VP4L_VP4L_H

/* C interface to the single-luminaire camera pose library.
 *
 * Every fallible call returns a vp4l_status. On failure the message for the
 * calling thread is available from vp4l_last_error_message() until the next
 * failing call on that thread. Handles are opaque and owned by the caller. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(VP4L_BUILDING_LIBRARY)
#    define VP4L_API __declspec(dllexport)
#  else
#    define VP4L_API __declspec(dllimport)
#  endif
#else
#  define VP4L_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vp4l_status {
  VP4L_OK = 0,
  VP4L_ERR_INVALID_ARGUMENT,
  VP4L_ERR_DEGENERATE_LINE,
  VP4L_ERR_PARALLEL_LINES,
  VP4L_ERR_BEHIND_CAMERA,
  VP4L_ERR_DEGENERATE_QUAD,
  VP4L_ERR_SINGULAR_CONFIGURATION,
  VP4L_ERR_NON_POSITIVE_VOLUME,
  VP4L_ERR_HEIGHT_MISMATCH,
  VP4L_ERR_AMBIGUOUS_SELECTION,
  VP4L_ERR_DEGENERATE_OBJECTIVE,
  VP4L_ERR_CONFIG,
  VP4L_ERR_SAMPLING_EXHAUSTED,
  VP4L_ERR_PARSE,
  VP4L_ERR_IO,
  VP4L_ERR_INTERNAL
} vp4l_status;

typedef enum vp4l_mode {
  VP4L_MODE_AUTO = 0, /* basic for a level luminaire, correction otherwise */
  VP4L_MODE_BASIC,    /* basic solver even on a tilted luminaire */
  VP4L_MODE_DH        /* height-search correction solver */
} vp4l_mode;

typedef struct vp4l_intrinsics {
  double u0, v0;        /* principal point, pixels */
  double focal_length;  /* meters */
  double f_u, f_v;      /* focal length in pixels */
} vp4l_intrinsics;

typedef struct vp4l_pose {
  double phi, theta, psi; /* radians, R = Rz(psi) Ry(theta) Rx(phi) */
  double rotation[9];     /* row-major camera-to-world rotation */
  double translation[3];  /* camera position in the world frame, meters */
  double residual;
  double delta_g;         /* normal mismatch, 0 for the basic solver */
  vp4l_mode mode;         /* solver actually used */
} vp4l_pose;

typedef struct vp4l_solve_options {
  vp4l_mode mode;
  double heading_hint;    /* rough yaw in radians, resolves the 180 degree ambiguity */
  double max_height;      /* upper bound of the height search, meters */
  double eps1, eps2;      /* grid spacing of the first two search stages */
  int stages;
  int has_known_height;   /* nonzero: use known_height as the camera height */
  double known_height;
} vp4l_solve_options;

typedef struct vp4l_scene_config {
  double room_length, room_width, room_height;
  double luminaire_length, luminaire_width;
  double tilt_deg;
  double u0, v0, focal_length, f_u, f_v;
  int image_width, image_height;
  double noise_sigma;
  int images_per_position;
  int quantize_pixels;
  int occlude_vertex; /* 1..4, 0 for none */
  double occlusion_edge_fraction;
  double camera_z_min;
  int has_camera_z_max;
  double camera_z_max;
  double max_tilt_perturbation_deg;
  double heading_hint_error_deg;
  int max_sampling_attempts;
  int known_height;
  double eps1, eps2;
  int search_stages;
  uint64_t seed;
  int threads; /* 0 picks hardware concurrency */
} vp4l_scene_config;

typedef struct vp4l_stats {
  double mean, median, std;
} vp4l_stats;

typedef struct vp4l_summary {
  int trials, ok, errors;
  vp4l_stats pe;               /* meters */
  vp4l_stats oe_x, oe_y, oe_z; /* degrees */
} vp4l_summary;

typedef struct vp4l_trial {
  int index;
  int ok;
  char status[32];
  double pe;
  double oe_x, oe_y, oe_z;
  double heading_hint;
  double corners[8]; /* observed pixel corners, u v pairs */
  vp4l_pose truth;
  vp4l_pose estimate; /* zeroed unless ok */
} vp4l_trial;

typedef struct vp4l_problem vp4l_problem;
typedef struct vp4l_experiment vp4l_experiment;

VP4L_API const char* vp4l_version(void);
VP4L_API const char* vp4l_status_string(vp4l_status status);
VP4L_API const char* vp4l_last_error_message(void);
VP4L_API const char* vp4l_mode_string(vp4l_mode mode);

VP4L_API void vp4l_solve_options_default(vp4l_solve_options* opts);

/* vertices: 4 world corners (x y z) in cyclic order. corners: 4 pixel
 * corners (u v) in any order. opts may be NULL for defaults. */
VP4L_API vp4l_status vp4l_solve(const vp4l_intrinsics* intrinsics, const double vertices[12],
                                const double corners[8], const vp4l_solve_options* opts,
                                vp4l_pose* out);

/* Position error in meters and per-axis Euler errors in degrees. */
VP4L_API void vp4l_pose_errors(const vp4l_pose* truth, const vp4l_pose* estimate, double* pe,
                               double oe_deg[3]);

VP4L_API vp4l_status vp4l_problem_load(const char* path, vp4l_problem** out);
VP4L_API vp4l_status vp4l_problem_parse(const char* text, vp4l_problem** out);
VP4L_API vp4l_status vp4l_problem_save(const vp4l_problem* problem, const char* path);
VP4L_API void vp4l_problem_destroy(vp4l_problem* problem);
/* Uses the heading hint, search settings, known height and mode stored in
 * the problem. From opts only a known height and a non-auto mode apply. */
VP4L_API vp4l_status vp4l_problem_solve(const vp4l_problem* problem,
                                        const vp4l_solve_options* opts, vp4l_pose* out);
/* *has_truth is 0 when the file carries no ground truth. */
VP4L_API vp4l_status vp4l_problem_truth(const vp4l_problem* problem, int* has_truth,
                                        vp4l_pose* out);

VP4L_API void vp4l_scene_config_default(vp4l_scene_config* cfg);
VP4L_API vp4l_status vp4l_scene_config_validate(const vp4l_scene_config* cfg);
/* Applies the file's keys on top of *cfg. */
VP4L_API vp4l_status vp4l_scene_config_load(const char* path, vp4l_scene_config* cfg);
VP4L_API vp4l_status vp4l_scene_config_save(const vp4l_scene_config* cfg, const char* path);

VP4L_API vp4l_status vp4l_experiment_run(const vp4l_scene_config* cfg, int trials,
                                         vp4l_mode mode, vp4l_experiment** out);
VP4L_API void vp4l_experiment_destroy(vp4l_experiment* exp);
VP4L_API vp4l_status vp4l_experiment_summary(const vp4l_experiment* exp, vp4l_summary* out);
VP4L_API int vp4l_experiment_trial_count(const vp4l_experiment* exp);
VP4L_API vp4l_status vp4l_experiment_trial(const vp4l_experiment* exp, int index,
                                           vp4l_trial* out);
VP4L_API vp4l_status vp4l_experiment_write_trials_csv(const vp4l_experiment* exp,
                                                      const char* path);
/* Writes trial `index` as a problem file that `vp4l_problem_load` accepts. */
VP4L_API vp4l_status vp4l_experiment_write_trial_problem(const vp4l_experiment* exp, int index,
                                                         const char* path);

VP4L_API const char* vp4l_summary_csv_header(void);
/* Writes one row without a newline. Returns the full length; the output is
 * truncated when it does not fit in cap bytes. */
VP4L_API size_t vp4l_summary_csv_row(const char* sweep, double value, vp4l_mode mode,
                                     const vp4l_summary* summary, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif
