#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "support.hpp"
#include "vp4l/geometry.hpp"

using namespace vp4l;
using doctest::Approx;

namespace {

const CameraIntrinsics kUnit(320.0, 240.0, 1.0, 800.0, 800.0);

bool on_line(const ImagePoint& p, const Line2D& l, double tol) {
  return std::abs(p.x * std::cos(l.phi) + p.y * std::sin(l.phi) - l.rho) <= tol;
}

}  // namespace

TEST_CASE("intrinsics derive the pixel pitch") {
  const CameraIntrinsics k(320.0, 240.0, 0.004, 800.0, 600.0);
  CHECK(k.d_x() * k.f_u() == Approx(0.004).epsilon(1e-15));
  CHECK(k.d_y() * k.f_v() == Approx(0.004).epsilon(1e-15));
  CHECK_THROWS_AS(CameraIntrinsics(0, 0, 0.0, 800, 800), Error);
  CHECK_THROWS_AS(CameraIntrinsics(0, 0, 0.004, -1, 800), Error);
  CHECK_THROWS_AS(CameraIntrinsics(0, 0, 0.004, 800, 0), Error);
}

TEST_CASE("pixel_to_image") {
  auto p = pixel_to_image({320, 240}, kUnit);
  CHECK(p.x == 0.0);
  CHECK(p.y == 0.0);
  p = pixel_to_image({1120, 240}, kUnit);
  CHECK(p.x == Approx(1.0));
  CHECK(p.y == 0.0);
  p = pixel_to_image({320, 1040}, kUnit);
  CHECK(p.x == 0.0);
  CHECK(p.y == Approx(1.0));

  const auto back = image_to_pixel(pixel_to_image({12.5, 400.25}, kUnit), kUnit);
  CHECK(back.u == Approx(12.5).epsilon(1e-14));
  CHECK(back.v == Approx(400.25).epsilon(1e-14));
}

TEST_CASE("image_to_ccs appends the focal length") {
  CHECK(image_to_ccs({0, 0}, kUnit) == Vec3(0, 0, 1));
  CHECK(image_to_ccs({0.5, -0.25}, kUnit) == Vec3(0.5, -0.25, 1));
  const CameraIntrinsics k8(0, 0, 0.008, 800, 800);
  CHECK(image_to_ccs({1, 1}, k8) == Vec3(1, 1, 0.008));
}

TEST_CASE("line_through") {
  auto l = line_through({0, 1}, {1, 0});
  CHECK(l.phi == Approx(std::numbers::pi / 4));
  CHECK(l.rho == Approx(std::sqrt(2.0) / 2));

  l = line_through({0, 0}, {1, 0});
  CHECK(l.rho == Approx(0.0));
  const bool vertical_normal = std::abs(l.phi - std::numbers::pi / 2) < 1e-12 ||
                               std::abs(l.phi - 3 * std::numbers::pi / 2) < 1e-12;
  CHECK(vertical_normal);

  l = line_through({1, 0}, {1, 1});
  CHECK(l.phi == Approx(0.0));
  CHECK(l.rho == Approx(1.0));

  CHECK_THROWS_AS(line_through({0.3, 0.3}, {0.3, 0.3}), Error);
  try {
    line_through({0.3, 0.3}, {0.3, 0.3 + 1e-13});
    FAIL("expected DegenerateLine");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateLine);
  }
}

TEST_CASE("line_through property: both points on the line, symmetric") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ImagePoint a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const Line2D l = line_through(a, b);
    CHECK(l.rho >= 0.0);
    CHECK(l.phi >= 0.0);
    CHECK(l.phi < 2 * std::numbers::pi);
    CHECK(on_line(a, l, 1e-12));
    CHECK(on_line(b, l, 1e-12));
    const Line2D r = line_through(b, a);
    CHECK(std::fmod(l.phi, std::numbers::pi) ==
          Approx(std::fmod(r.phi, std::numbers::pi)).epsilon(1e-9));
    CHECK(on_line(a, r, 1e-12));
    CHECK(on_line(b, r, 1e-12));
  }
}

TEST_CASE("lateral_plane") {
  const CameraIntrinsics k(0, 0, 1.0, 1.0, 1.0);
  Vec3 n = lateral_plane({1, 0}, {0, 1}, k).normal;
  CHECK(std::abs(n.dot(Vec3(-1, -1, 1).normalized())) == Approx(1.0));
  n = lateral_plane({0, 0}, {1, 0}, k).normal;
  CHECK(std::abs(n.dot(Vec3(0, -1, 0))) == Approx(1.0));

  // Same plane as the point-normal form built from the line parameters.
  const Line2D l = line_through({0, 1}, {1, 0});
  const auto line_form = oracle::line_plane(l.phi, l.rho, 1.0);
  n = lateral_plane({0, 1}, {1, 0}, k).normal;
  CHECK(std::abs(n.dot(support::vec(line_form)) / oracle::norm(line_form)) == Approx(1.0));
  CHECK(std::abs(n.dot(Vec3(1, 1, -1).normalized())) == Approx(1.0));
}

TEST_CASE("lateral_plane property: orthogonal to both rays and matches the line form") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.002, 0.002);
  const CameraIntrinsics k(320, 240, 0.004, 800, 800);
  for (int i = 0; i < 1000; ++i) {
    const ImagePoint a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const Vec3 n = lateral_plane(a, b, k).normal;
    CHECK(n.norm() == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(n.dot(image_to_ccs(a, k).normalized())) <= 1e-12);
    CHECK(std::abs(n.dot(image_to_ccs(b, k).normalized())) <= 1e-12);

    const Line2D l = line_through(a, b);
    if (std::abs(std::sin(l.phi)) < 0.05 || std::abs(std::cos(l.phi)) < 0.05) continue;
    const auto line_form = oracle::line_plane(l.phi, l.rho, k.f());
    CHECK(std::abs(n.dot(support::vec(line_form))) / oracle::norm(line_form) ==
          Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("rotation_from_euler") {
  CHECK(rotation_from_euler({0, 0, 0}).isApprox(Mat3::Identity(), 1e-15));
  const Mat3 rz = rotation_from_euler({0, 0, std::numbers::pi / 2});
  CHECK((rz * Vec3::UnitX() - Vec3::UnitY()).norm() <= 1e-15);

  const Mat3 r = rotation_from_euler({0.1, 0.2, 0.3});
  const auto c = oracle::c_row(0.1, 0.2);
  for (int j = 0; j < 3; ++j) CHECK(r(2, j) == Approx(c[j]).epsilon(1e-15));
}

TEST_CASE("rotation_from_euler property: orthonormal, det 1, matches closed form") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-oracle::kPi, oracle::kPi);
  for (int i = 0; i < 1000; ++i) {
    const double phi = u(rng) / 2, theta = u(rng) / 2, psi = u(rng);
    const Mat3 r = rotation_from_euler({phi, theta, psi});
    CHECK((r.transpose() * r - Mat3::Identity()).norm() <= 1e-12);
    CHECK(std::abs(r.determinant() - 1.0) <= 1e-12);
    const auto o = oracle::rotation(phi, theta, psi);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(std::abs(r(a, b) - o[a][b]) <= 1e-14);
  }
}

TEST_CASE("intersect_lines") {
  Line2D x1{0.0, 1.0}, y1{std::numbers::pi / 2, 1.0};
  auto p = intersect_lines(x1, y1);
  CHECK(p.x == Approx(1.0));
  CHECK(p.y == Approx(1.0));

  p = intersect_lines(line_through({0, 1}, {1, 0}), line_through({0, 0}, {1, 1}));
  CHECK(p.x == Approx(0.5));
  CHECK(p.y == Approx(0.5));

  try {
    intersect_lines({0.3, 1.0}, {0.3, 2.0});
    FAIL("expected ParallelLines");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParallelLines);
  }
}

TEST_CASE("intersect_lines property: point satisfies both lines") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Line2D a = line_through({u(rng), u(rng)}, {u(rng), u(rng)});
    const Line2D b = line_through({u(rng), u(rng)}, {u(rng), u(rng)});
    if (std::abs(std::sin(a.phi - b.phi)) < 1e-3) continue;
    const ImagePoint p = intersect_lines(a, b);
    CHECK(on_line(p, a, 1e-9));
    CHECK(on_line(p, b, 1e-9));
  }
}

TEST_CASE("project_vertex") {
  const Mat3 r = Mat3::Identity();
  const Vec3 t = Vec3::Zero();
  auto px = project_vertex({0, 0, 2}, r, t, kUnit);
  CHECK(px.u == Approx(320));
  CHECK(px.v == Approx(240));
  px = project_vertex({1, 0, 2}, r, t, kUnit);
  CHECK(px.u == Approx(720));
  CHECK(px.v == Approx(240));
  try {
    project_vertex({0, 0, 0.5}, r, t, kUnit);
    FAIL("expected BehindCamera");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BehindCamera);
  }
}

TEST_CASE("project_vertex property: matches the oracle and round-trips onto the ray") {
  std::mt19937 rng(13);
  const oracle::Camera cam;
  const auto k = support::intrinsics(cam);
  const auto verts = oracle::rectangle(support::kCenter, 1.2, 0.4, 0.0);
  for (int i = 0; i < 1000; ++i) {
    const oracle::Pose pose = oracle::random_pose(rng, verts, cam);
    const Mat3 r = rotation_from_euler({pose.phi, pose.theta, pose.psi});
    for (const auto& v : verts) {
      const PixelPoint px = project_vertex(support::vec(v), r, support::vec(pose.t), k);
      const auto want = oracle::pixel(oracle::to_camera(v, pose), cam);
      CHECK(px.u == Approx(want[0]).epsilon(1e-12));
      CHECK(px.v == Approx(want[1]).epsilon(1e-12));

      const Vec3 ray = image_to_ccs(pixel_to_image(px, k), k).normalized();
      const Vec3 p_c = support::vec(oracle::to_camera(v, pose));
      CHECK((p_c - ray * ray.dot(p_c)).norm() <= 1e-9);
    }
  }
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(std::numbers::pi) == Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == Approx(std::numbers::pi));
  CHECK(wrap_angle(3 * std::numbers::pi / 2) == Approx(-std::numbers::pi / 2));
}
