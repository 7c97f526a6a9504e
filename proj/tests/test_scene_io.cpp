#include <doctest.h>

#include <sstream>

#include "vp4l/scene_io.hpp"

using namespace vp4l;
using doctest::Approx;

namespace {

const char* kProblem = R"(vp4l-problem 1
# level luminaire, camera 2 m below
u0 = 320
v0 = 240
focal_length = 0.004
f_u = 800
f_v = 800
vertex1 = 3.1 2.7 3
vertex2 = 1.9 2.7 3
vertex3 = 1.9 2.3 3
vertex4 = 3.1 2.3 3
corner1 = 560 320
corner2 = 80 320
corner3 = 80 160
corner4 = 560 160
heading_hint_deg = 90
)";

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_problem(in);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("read_problem") {
  std::istringstream in(kProblem);
  const Problem p = read_problem(in);
  CHECK(p.intrinsics.f() == 0.004);
  CHECK(p.luminaire.area() == Approx(0.48));
  CHECK(p.observation.corners[1].u == 80.0);
  CHECK(p.heading_hint == Approx(std::numbers::pi / 2));
  CHECK_FALSE(p.truth.has_value());
}

TEST_CASE("problem files round-trip exactly") {
  std::istringstream in(kProblem);
  Problem p = read_problem(in);
  p.observation.corners[0] = {0.1 + 0.2, 1.0 / 3.0};
  p.heading_hint = -2.0 / 7.0;
  TruePose t;
  t.translation = {2.5, 2.5 + 1e-17, 1.0 / 3.0};
  t.euler = {0.01, -0.02, 3.0};
  t.rotation = rotation_from_euler(t.euler);
  p.truth = t;

  std::ostringstream out;
  write_problem(out, p);
  std::istringstream back(out.str());
  const Problem q = read_problem(back);
  CHECK(q.observation.corners[0].u == p.observation.corners[0].u);
  CHECK(q.observation.corners[0].v == p.observation.corners[0].v);
  CHECK(q.heading_hint == p.heading_hint);
  REQUIRE(q.truth.has_value());
  CHECK(q.truth->translation == p.truth->translation);
  CHECK(q.truth->euler.psi == 3.0);
  for (int i = 0; i < 4; ++i) CHECK(q.luminaire.vertices()[i] == p.luminaire.vertices()[i]);
}

TEST_CASE("parse errors name the line and field") {
  std::string msg = parse_error(replace(kProblem, "f_u = 800", "f_u = 8x0"));
  CHECK(msg.find("line 6") != std::string::npos);
  CHECK(msg.find("'f_u'") != std::string::npos);

  msg = parse_error(replace(kProblem, "corner3 = 80 160", "corner3 = 80"));
  CHECK(msg.find("'corner3'") != std::string::npos);
  CHECK(msg.find("line 14") != std::string::npos);

  msg = parse_error(replace(kProblem, "corner2 = 80 320\n", ""));
  CHECK(msg.find("missing field 'corner2'") != std::string::npos);

  msg = parse_error(replace(kProblem, "vp4l-problem 1", "vp4l-problem 2"));
  CHECK(msg.find("header") != std::string::npos);

  msg = parse_error(std::string(kProblem) + "colour = 3\n");
  CHECK(msg.find("unknown field 'colour'") != std::string::npos);

  msg = parse_error(std::string(kProblem) + "u0 = 3\n");
  CHECK(msg.find("duplicate field 'u0'") != std::string::npos);

  msg = parse_error(std::string(kProblem) + "just words\n");
  CHECK(msg.find("key = value") != std::string::npos);

  msg = parse_error(std::string(kProblem) + "heading_hint_rad = 1\n");
  CHECK(msg.find("conflicts") != std::string::npos);

  msg = parse_error(replace(kProblem, "vertex2 = 1.9 2.7 3", "vertex2 = 1.9 2.9 3"));
  CHECK(msg.find("vertex") != std::string::npos);

  msg = parse_error(replace(kProblem, "focal_length = 0.004", "focal_length = -1"));
  CHECK(msg.find("intrinsics") != std::string::npos);

  CHECK(parse_error("").find("missing header") != std::string::npos);
}

TEST_CASE("missing files raise IoError") {
  try {
    read_problem_file("/nonexistent/vp4l.txt");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
}

TEST_CASE("scene config files") {
  SceneConfig c;
  c.tilt_deg = 12.5;
  c.camera_z_max = 2.0;
  c.quantize_pixels = true;
  c.seed = 0xfedcba9876543211ull;
  std::ostringstream out;
  write_scene_config(out, c);
  std::istringstream in(out.str());
  const SceneConfig d = read_scene_config(in);
  CHECK(d.tilt_deg == 12.5);
  CHECK(d.camera_z_max.value() == 2.0);
  CHECK(d.quantize_pixels);
  CHECK(d.seed == c.seed);
  CHECK(d.images_per_position == 20);

  std::istringstream partial("vp4l-scene 1\nnoise_sigma = 3\n");
  const SceneConfig e = read_scene_config(partial);
  CHECK(e.noise_sigma == 3.0);
  CHECK(e.room_height == 3.0);

  std::istringstream bad_int("vp4l-scene 1\nimages_per_position = 2.5\n");
  CHECK_THROWS_AS(read_scene_config(bad_int), Error);
  std::istringstream invalid("vp4l-scene 1\ntilt_deg = 95\n");
  CHECK_THROWS_AS(read_scene_config(invalid), Error);
  std::istringstream negative("vp4l-scene 1\nseed = -1\n");
  CHECK_THROWS_AS(read_scene_config(negative), Error);
  std::istringstream unknown("vp4l-scene 1\nroom_depth = 3\n");
  CHECK_THROWS_AS(read_scene_config(unknown), Error);
}

TEST_CASE("a dumped trial solves to the in-process estimate") {
  SceneConfig c;
  c.tilt_deg = 20.0;
  c.threads = 1;
  const MonteCarloRun run = run_monte_carlo(c, 10, SolverMode::Auto);
  for (const auto& t : run.trials) {
    REQUIRE(t.ok());
    std::ostringstream out;
    write_problem(out, problem_from_trial(c, t));
    std::istringstream in(out.str());
    const Problem p = read_problem(in);
    SolveOptions o;
    o.heading_hint = p.heading_hint;
    o.search = c.search();
    const Solution s = solve_pose(p.observation.corners, p.luminaire, p.intrinsics, o);
    CHECK(s.used == SolverMode::Dh);
    CHECK(s.pose.translation == t.estimate->translation);
    CHECK(s.pose.euler.psi == t.estimate->euler.psi);
  }
}
