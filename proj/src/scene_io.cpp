#include "vp4l/scene_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

namespace vp4l {
namespace {

constexpr std::string_view kProblemHeader = "vp4l-problem 1";
constexpr std::string_view kSceneHeader = "vp4l-scene 1";

struct Entry {
  int line = 0;
  std::string value;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::map<std::string, Entry> parse_entries(std::istream& is, std::string_view header) {
  std::map<std::string, Entry> out;
  std::string raw;
  int line = 0;
  bool seen_header = false;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(std::string_view(raw).substr(0, hash));
    if (text.empty()) continue;
    if (!seen_header) {
      if (text != header) fail(line, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) fail(line, "missing key before '='");
    if (out.contains(key)) fail(line, "duplicate field '" + key + "'");
    out[key] = {line, value};
  }
  if (!seen_header) fail(line + 1, "missing header '" + std::string(header) + "'");
  return out;
}

std::vector<double> parse_numbers(const std::string& key, const Entry& e, std::size_t count) {
  std::vector<double> out;
  const char* p = e.value.data();
  const char* end = p + e.value.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == ',')) ++p;
    if (p == end) break;
    double v = 0.0;
    const auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != ',')) {
      fail(e.line, "field '" + key + "' has a malformed number");
    }
    out.push_back(v);
    p = next;
  }
  if (out.size() != count) {
    fail(e.line, "field '" + key + "' expects " + std::to_string(count) + " number(s), got " +
                     std::to_string(out.size()));
  }
  return out;
}

class Fields {
 public:
  explicit Fields(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  std::vector<double> numbers(const std::string& key, std::size_t count) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw Error(ErrorKind::ParseError, "missing field '" + key + "'");
    }
    used_.push_back(key);
    return parse_numbers(key, it->second, count);
  }

  double number(const std::string& key) { return numbers(key, 1)[0]; }

  const std::string& text(const std::string& key) {
    used_.push_back(key);
    return entries_.at(key).value;
  }

  int line(const std::string& key) const { return entries_.at(key).line; }

  void reject_unknown() const {
    for (const auto& [key, e] : entries_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        fail(e.line, "unknown field '" + key + "'");
      }
    }
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<std::string> used_;
};

int as_int(const std::string& key, double v, int line) {
  if (v != static_cast<double>(static_cast<long long>(v)) || v < -2147483648.0 ||
      v > 2147483647.0) {
    fail(line, "field '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Problem read_problem(std::istream& is) {
  Fields f(parse_entries(is, kProblemHeader));

  Problem p;
  const double u0 = f.number("u0");
  const double v0 = f.number("v0");
  const double focal = f.number("focal_length");
  const double f_u = f.number("f_u");
  const double f_v = f.number("f_v");
  try {
    p.intrinsics = CameraIntrinsics(u0, v0, focal, f_u, f_v);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, std::string("intrinsics: ") + e.what());
  }

  std::array<Vec3, 4> verts;
  for (int i = 0; i < 4; ++i) {
    const auto v = f.numbers("vertex" + std::to_string(i + 1), 3);
    verts[i] = {v[0], v[1], v[2]};
  }
  try {
    p.luminaire = LuminaireSpec(verts);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(f.line("vertex1")) + ": field 'vertex1'..'vertex4': " +
                    e.what());
  }

  for (int i = 0; i < 4; ++i) {
    const auto c = f.numbers("corner" + std::to_string(i + 1), 2);
    p.observation.corners[i] = {c[0], c[1]};
  }

  if (f.has("heading_hint_rad") && f.has("heading_hint_deg")) {
    fail(f.line("heading_hint_deg"), "field 'heading_hint_deg' conflicts with 'heading_hint_rad'");
  }
  if (f.has("heading_hint_rad")) p.heading_hint = f.number("heading_hint_rad");
  if (f.has("heading_hint_deg")) {
    p.heading_hint = f.number("heading_hint_deg") * std::numbers::pi / 180.0;
  }

  if (f.has("search")) {
    const auto v = f.numbers("search", 4);
    p.search = {v[0], v[1], v[2], 0};
    p.search.stages = as_int("search", v[3], f.line("search"));
    try {
      p.search.validate();
    } catch (const Error& e) {
      fail(f.line("search"), std::string("field 'search': ") + e.what());
    }
  }
  if (f.has("known_height")) p.known_height = f.number("known_height");
  if (f.has("mode")) {
    const std::string& m = f.text("mode");
    if (m == "auto") {
      p.mode = SolverMode::Auto;
    } else if (m == "basic") {
      p.mode = SolverMode::Basic;
    } else if (m == "dh") {
      p.mode = SolverMode::Dh;
    } else {
      fail(f.line("mode"), "field 'mode' must be auto, basic or dh");
    }
  }

  if (f.has("true_position") || f.has("true_euler_rad")) {
    TruePose t;
    const auto pos = f.numbers("true_position", 3);
    const auto eul = f.numbers("true_euler_rad", 3);
    t.translation = {pos[0], pos[1], pos[2]};
    t.euler = {eul[0], eul[1], eul[2]};
    t.rotation = rotation_from_euler(t.euler);
    p.truth = t;
  }
  f.reject_unknown();
  return p;
}

Problem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_problem(in);
}

void write_problem(std::ostream& os, const Problem& p) {
  const auto& k = p.intrinsics;
  os << kProblemHeader << '\n';
  os << "u0 = " << num(k.u0()) << '\n';
  os << "v0 = " << num(k.v0()) << '\n';
  os << "focal_length = " << num(k.f()) << '\n';
  os << "f_u = " << num(k.f_u()) << '\n';
  os << "f_v = " << num(k.f_v()) << '\n';
  for (int i = 0; i < 4; ++i) {
    const Vec3& v = p.luminaire.vertices()[i];
    os << "vertex" << i + 1 << " = " << num(v.x()) << ' ' << num(v.y()) << ' ' << num(v.z())
       << '\n';
  }
  for (int i = 0; i < 4; ++i) {
    const PixelPoint& c = p.observation.corners[i];
    os << "corner" << i + 1 << " = " << num(c.u) << ' ' << num(c.v) << '\n';
  }
  os << "heading_hint_rad = " << num(p.heading_hint) << '\n';
  os << "search = " << num(p.search.max_height) << ' ' << num(p.search.eps1) << ' '
     << num(p.search.eps2) << ' ' << p.search.stages << '\n';
  if (p.known_height) os << "known_height = " << num(*p.known_height) << '\n';
  os << "mode = " << to_string(p.mode) << '\n';
  if (p.truth) {
    const auto& t = *p.truth;
    os << "true_position = " << num(t.translation.x()) << ' ' << num(t.translation.y()) << ' '
       << num(t.translation.z()) << '\n';
    os << "true_euler_rad = " << num(t.euler.phi) << ' ' << num(t.euler.theta) << ' '
       << num(t.euler.psi) << '\n';
  }
}

void write_problem_file(const std::string& path, const Problem& p) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  write_problem(out, p);
  if (!out) throw Error(ErrorKind::IoError, "failed writing '" + path + "'");
}

Problem problem_from_trial(const SceneConfig& cfg, const TrialResult& trial) {
  Problem p{cfg.intrinsics(), make_scene(cfg), trial.observation, trial.heading_hint,
            cfg.search(), std::nullopt, SolverMode::Auto, trial.truth};
  if (cfg.known_height) p.known_height = trial.truth.translation.z();
  if (trial.ok()) p.mode = trial.used;
  return p;
}

namespace {

struct SceneKey {
  const char* name;
  std::function<void(SceneConfig&, double)> set;
  std::function<double(const SceneConfig&)> get;
};

#define VP4L_REAL(field) \
  SceneKey{#field, [](SceneConfig& c, double v) { c.field = v; }, \
           [](const SceneConfig& c) { return static_cast<double>(c.field); }}

const std::vector<SceneKey>& real_keys() {
  static const std::vector<SceneKey> keys = {
      VP4L_REAL(room_length), VP4L_REAL(room_width), VP4L_REAL(room_height),
      VP4L_REAL(luminaire_length), VP4L_REAL(luminaire_width), VP4L_REAL(tilt_deg),
      VP4L_REAL(u0), VP4L_REAL(v0), VP4L_REAL(focal_length), VP4L_REAL(f_u), VP4L_REAL(f_v),
      VP4L_REAL(noise_sigma), VP4L_REAL(occlusion_edge_fraction), VP4L_REAL(camera_z_min),
      VP4L_REAL(max_tilt_perturbation_deg), VP4L_REAL(heading_hint_error_deg),
      VP4L_REAL(eps1), VP4L_REAL(eps2)};
  return keys;
}

#undef VP4L_REAL

}  // namespace

SceneConfig read_scene_config(std::istream& is, SceneConfig cfg) {
  Fields f(parse_entries(is, kSceneHeader));
  for (const auto& key : real_keys()) {
    if (f.has(key.name)) key.set(cfg, f.number(key.name));
  }
  auto integer = [&](const std::string& key, auto& field) {
    if (f.has(key)) field = as_int(key, f.number(key), f.line(key));
  };
  integer("image_width", cfg.image_width);
  integer("image_height", cfg.image_height);
  integer("images_per_position", cfg.images_per_position);
  integer("occlude_vertex", cfg.occlude_vertex);
  integer("max_sampling_attempts", cfg.max_sampling_attempts);
  integer("search_stages", cfg.search_stages);
  integer("threads", cfg.threads);
  if (f.has("camera_z_max")) cfg.camera_z_max = f.number("camera_z_max");
  auto flag = [&](const std::string& key, bool& field) {
    if (f.has(key)) field = as_int(key, f.number(key), f.line(key)) != 0;
  };
  flag("quantize_pixels", cfg.quantize_pixels);
  flag("known_height", cfg.known_height);
  if (f.has("seed")) {
    const std::string& s = f.text("seed");
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), cfg.seed);
    if (ec != std::errc() || end != s.data() + s.size()) {
      fail(f.line("seed"), "field 'seed' must be a non-negative integer");
    }
  }
  f.reject_unknown();
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, std::string("scene: ") + e.what());
  }
  return cfg;
}

SceneConfig read_scene_config_file(const std::string& path, SceneConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_scene_config(in, base);
}

void write_scene_config(std::ostream& os, const SceneConfig& cfg) {
  os << kSceneHeader << '\n';
  for (const auto& key : real_keys()) os << key.name << " = " << num(key.get(cfg)) << '\n';
  os << "image_width = " << cfg.image_width << '\n';
  os << "image_height = " << cfg.image_height << '\n';
  os << "images_per_position = " << cfg.images_per_position << '\n';
  os << "occlude_vertex = " << cfg.occlude_vertex << '\n';
  os << "max_sampling_attempts = " << cfg.max_sampling_attempts << '\n';
  os << "search_stages = " << cfg.search_stages << '\n';
  os << "threads = " << cfg.threads << '\n';
  os << "camera_z_max = " << num(cfg.camera_z_upper()) << '\n';
  os << "quantize_pixels = " << (cfg.quantize_pixels ? 1 : 0) << '\n';
  os << "known_height = " << (cfg.known_height ? 1 : 0) << '\n';
  os << "seed = " << cfg.seed << '\n';
}

}  // namespace vp4l
