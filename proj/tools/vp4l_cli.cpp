// vp4l: solve a single observation or run the simulated accuracy sweeps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vp4l/vp4l.h"

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = 180.0 / kPi;

struct CliError {
  std::string message;
};

void check(vp4l_status s, const std::string& what) {
  if (s != VP4L_OK) {
    throw CliError{what + ": " + vp4l_status_string(s) + ": " + vp4l_last_error_message()};
  }
}

struct Common {
  uint64_t seed = 0;
  int trials = 1000;
  double sigma = 0.0;
  double width_m = 0.0;
  double tilt_deg = 0.0;
  int images = 0;
  int occlude = 0;
  bool quantize = false;
  bool known_height = false;
  int threads = 0;
  std::string config;
  std::string out;
};

// Flags shared by the randomized subcommands. Values left unset keep the
// scene defaults (or the --config file).
void add_common(CLI::App* app, Common& c, vp4l_scene_config& defaults) {
  c.seed = defaults.seed;
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
  app->add_option("--trials", c.trials, "camera positions per setting")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--sigma", c.sigma, "pixel noise standard deviation")
      ->default_str(std::to_string(defaults.noise_sigma))
      ->check(CLI::Range(0.0, 1e6));
  app->add_option("--width-m", c.width_m, "luminaire width in meters")
      ->default_str(std::to_string(defaults.luminaire_width));
  app->add_option("--tilt-deg", c.tilt_deg, "luminaire tilt in degrees")
      ->default_str(std::to_string(defaults.tilt_deg));
  app->add_option("--images", c.images, "images averaged per position")
      ->default_str(std::to_string(defaults.images_per_position))
      ->check(CLI::PositiveNumber);
  app->add_option("--occlude", c.occlude, "hide world corner 1..4")->check(CLI::Range(1, 4));
  app->add_flag("--quantize", c.quantize, "round noisy corners to whole pixels");
  app->add_flag("--known-height", c.known_height, "treat the camera height as known");
  app->add_option("--threads", c.threads, "worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--config", c.config, "scene file applied before the flags")
      ->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output CSV path (stdout when omitted)");
}

vp4l_scene_config build_config(const CLI::App* app, const Common& c) {
  vp4l_scene_config cfg;
  vp4l_scene_config_default(&cfg);
  if (!c.config.empty()) check(vp4l_scene_config_load(c.config.c_str(), &cfg), c.config);
  cfg.seed = c.seed;
  if (app->count("--sigma")) cfg.noise_sigma = c.sigma;
  if (app->count("--width-m")) cfg.luminaire_width = c.width_m;
  if (app->count("--tilt-deg")) cfg.tilt_deg = c.tilt_deg;
  if (app->count("--images")) cfg.images_per_position = c.images;
  if (app->count("--occlude")) cfg.occlude_vertex = c.occlude;
  if (c.quantize) cfg.quantize_pixels = 1;
  if (c.known_height) cfg.known_height = 1;
  if (app->count("--threads")) cfg.threads = c.threads;
  check(vp4l_scene_config_validate(&cfg), "configuration");
  return cfg;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw CliError{"--values: bad number '" + item + "'"};
    out.push_back(v);
  }
  if (out.empty()) throw CliError{"--values: empty list"};
  return out;
}

std::string summary_row(const char* sweep, double value, vp4l_mode mode,
                        const vp4l_summary& s) {
  const size_t n = vp4l_summary_csv_row(sweep, value, mode, &s, nullptr, 0);
  std::string row(n + 1, '\0');
  vp4l_summary_csv_row(sweep, value, mode, &s, row.data(), row.size());
  row.resize(n);
  return row;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw CliError{"cannot write '" + path + "'"};
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Experiment {
  vp4l_experiment* handle = nullptr;
  Experiment(const vp4l_scene_config& cfg, int trials, vp4l_mode mode) {
    check(vp4l_experiment_run(&cfg, trials, mode, &handle), "simulation");
  }
  ~Experiment() { vp4l_experiment_destroy(handle); }
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  vp4l_summary summary() const {
    vp4l_summary s;
    check(vp4l_experiment_summary(handle, &s), "summary");
    return s;
  }
};

void print_pose(const vp4l_pose& p) {
  std::printf("mode: %s\n", vp4l_mode_string(p.mode));
  std::printf("euler_deg: %.9f %.9f %.9f\n", p.phi * kDeg, p.theta * kDeg, p.psi * kDeg);
  std::printf("translation_m: %.9f %.9f %.9f\n", p.translation[0], p.translation[1],
              p.translation[2]);
  std::printf("residual: %.9g\n", p.residual);
  if (p.mode == VP4L_MODE_DH) std::printf("delta_g: %.9g\n", p.delta_g);
}

int cmd_solve(const std::string& path, const std::string& mode_name, bool force_basic,
              const CLI::App* app, double known_height) {
  vp4l_problem* problem = nullptr;
  check(vp4l_problem_load(path.c_str(), &problem), path);
  vp4l_solve_options opts;
  vp4l_solve_options_default(&opts);
  if (mode_name == "basic" || force_basic) {
    opts.mode = VP4L_MODE_BASIC;
  } else if (mode_name == "dh") {
    opts.mode = VP4L_MODE_DH;
  }
  if (app->count("--known-height")) {
    opts.has_known_height = 1;
    opts.known_height = known_height;
  }
  vp4l_pose pose;
  const vp4l_status s = vp4l_problem_solve(problem, &opts, &pose);
  if (s != VP4L_OK) {
    vp4l_problem_destroy(problem);
    check(s, "solve");
  }
  print_pose(pose);

  int has_truth = 0;
  vp4l_pose truth;
  vp4l_problem_truth(problem, &has_truth, &truth);
  if (has_truth) {
    double pe = 0.0, oe[3] = {0.0, 0.0, 0.0};
    vp4l_pose_errors(&truth, &pose, &pe, oe);
    std::printf("pe_m: %.9g\n", pe);
    std::printf("oe_deg: %.9g %.9g %.9g\n", oe[0], oe[1], oe[2]);
  }
  vp4l_problem_destroy(problem);
  return 0;
}

int cmd_simulate(const CLI::App* app, const Common& c, bool force_basic, int dump_trial,
                 const std::string& dump_path, const std::string& trials_csv) {
  const vp4l_scene_config cfg = build_config(app, c);
  const vp4l_mode mode = force_basic ? VP4L_MODE_BASIC : VP4L_MODE_AUTO;
  std::fprintf(stderr, "seed: %llu\n", static_cast<unsigned long long>(cfg.seed));
  Experiment exp(cfg, c.trials, mode);

  Output out(c.out);
  out.stream() << vp4l_summary_csv_header() << '\n'
               << summary_row("single", cfg.tilt_deg, mode, exp.summary()) << '\n';
  if (!trials_csv.empty()) {
    check(vp4l_experiment_write_trials_csv(exp.handle, trials_csv.c_str()), trials_csv);
  }
  if (!dump_path.empty()) {
    check(vp4l_experiment_write_trial_problem(exp.handle, dump_trial, dump_path.c_str()),
          dump_path);
  }
  return 0;
}

enum class Sweep { Tilt, Width, Noise };

int cmd_sweep(Sweep kind, const CLI::App* app, const Common& c, const std::string& values,
              bool force_basic) {
  vp4l_scene_config cfg = build_config(app, c);
  std::vector<double> vals;
  const char* name = "";
  double lo = 0.0, hi = 0.0;
  switch (kind) {
    case Sweep::Tilt:
      name = "tilt_deg";
      vals = {0, 10, 20, 30, 40};
      lo = 0.0;
      hi = 40.0;
      break;
    case Sweep::Width:
      name = "width_m";
      vals = {0.2, 0.4, 0.6, 0.8, 1.0};
      lo = 0.2;
      hi = 1.0;
      break;
    case Sweep::Noise:
      name = "sigma_px";
      vals = {0, 1, 2, 3, 4};
      lo = 0.0;
      hi = 4.0;
      break;
  }
  if (!values.empty()) vals = parse_values(values);
  for (double v : vals) {
    if (!(v >= lo && v <= hi)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s value %g outside [%g, %g]", name, v, lo, hi);
      throw CliError{buf};
    }
  }

  std::vector<vp4l_mode> modes = {VP4L_MODE_BASIC, VP4L_MODE_DH, VP4L_MODE_AUTO};
  if (force_basic) modes = {VP4L_MODE_BASIC};

  std::fprintf(stderr, "seed: %llu\n", static_cast<unsigned long long>(cfg.seed));
  Output out(c.out);
  out.stream() << vp4l_summary_csv_header() << '\n';
  for (double v : vals) {
    switch (kind) {
      case Sweep::Tilt: cfg.tilt_deg = v; break;
      case Sweep::Width: cfg.luminaire_width = v; break;
      case Sweep::Noise: cfg.noise_sigma = v; break;
    }
    check(vp4l_scene_config_validate(&cfg), name);
    for (vp4l_mode m : modes) {
      Experiment exp(cfg, c.trials, m);
      out.stream() << summary_row(name, v, m, exp.summary()) << '\n';
      out.stream().flush();
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera pose from the four corners of one rectangular luminaire"};
  app.set_version_flag("--version", std::string(vp4l_version()));
  app.require_subcommand(1);

  vp4l_scene_config defaults;
  vp4l_scene_config_default(&defaults);

  auto* solve = app.add_subcommand("solve", "estimate the pose for one problem file");
  std::string problem_path, mode_name = "auto";
  bool solve_force_basic = false;
  double known_height = 0.0;
  solve->add_option("file", problem_path, "problem file")->required()->check(CLI::ExistingFile);
  solve->add_option("--mode", mode_name, "solver mode")
      ->check(CLI::IsMember({"auto", "basic", "dh"}))
      ->capture_default_str();
  solve->add_flag("--force-basic", solve_force_basic, "same as --mode basic");
  solve->add_option("--known-height", known_height, "known camera height in meters");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run at one setting");
  Common sim;
  add_common(simulate, sim, defaults);
  bool sim_force_basic = false;
  int dump_trial = 0;
  std::string dump_path, trials_csv;
  simulate->add_flag("--force-basic", sim_force_basic, "basic solver even when tilted");
  simulate->add_option("--trials-csv", trials_csv, "per-trial CSV path");
  simulate->add_option("--dump-trial", dump_trial, "trial index written by --dump-path")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--dump-path", dump_path, "write one trial as a problem file");

  struct SweepCmd {
    Sweep kind;
    CLI::App* app;
    Common common;
    std::string values;
    bool force_basic = false;
  };
  std::vector<SweepCmd> sweeps(3);
  const std::pair<const char*, const char*> sweep_names[] = {
      {"sweep-tilt", "accuracy against luminaire tilt (0-40 degrees)"},
      {"sweep-width", "accuracy against luminaire width (0.2-1.0 m)"},
      {"sweep-noise", "accuracy against pixel noise (0-4 px)"}};
  for (int i = 0; i < 3; ++i) {
    auto& s = sweeps[static_cast<std::size_t>(i)];
    s.kind = static_cast<Sweep>(i);
    s.app = app.add_subcommand(sweep_names[i].first, sweep_names[i].second);
    add_common(s.app, s.common, defaults);
    s.app->add_option("--values", s.values, "comma-separated swept values");
    s.app->add_flag("--force-basic", s.force_basic, "only the basic-forced rows");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      return cmd_solve(problem_path, mode_name, solve_force_basic, solve, known_height);
    }
    if (*simulate) {
      return cmd_simulate(simulate, sim, sim_force_basic, dump_trial, dump_path, trials_csv);
    }
    for (auto& s : sweeps) {
      if (*s.app) return cmd_sweep(s.kind, s.app, s.common, s.values, s.force_basic);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "vp4l: %s\n", e.message.c_str());
    return 2;
  }
  return 1;
}
