#include "vp4l/geometry.hpp"

#include <cmath>
#include <numbers>

namespace vp4l {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateLine: return "degenerate_line";
    case ErrorKind::ParallelLines: return "parallel_lines";
    case ErrorKind::BehindCamera: return "behind_camera";
    case ErrorKind::DegenerateQuad: return "degenerate_quad";
    case ErrorKind::SingularConfiguration: return "singular_configuration";
    case ErrorKind::NonPositiveVolume: return "non_positive_volume";
    case ErrorKind::HeightMismatch: return "height_mismatch";
    case ErrorKind::AmbiguousSelection: return "ambiguous_selection";
    case ErrorKind::DegenerateObjective: return "degenerate_objective";
    case ErrorKind::ConfigError: return "config_error";
    case ErrorKind::SamplingExhausted: return "sampling_exhausted";
    case ErrorKind::ParseError: return "parse_error";
    case ErrorKind::IoError: return "io_error";
  }
  return "unknown";
}

CameraIntrinsics::CameraIntrinsics(double u0, double v0, double f, double f_u,
                                   double f_v)
    : u0_(u0), v0_(v0), f_(f), f_u_(f_u), f_v_(f_v) {
  if (!std::isfinite(u0) || !std::isfinite(v0)) {
    throw Error(ErrorKind::ConfigError, "principal point must be finite");
  }
  if (!(std::isfinite(f) && f > 0.0)) {
    throw Error(ErrorKind::ConfigError, "focal length f must be positive");
  }
  if (!(std::isfinite(f_u) && f_u > 0.0 && std::isfinite(f_v) && f_v > 0.0)) {
    throw Error(ErrorKind::ConfigError, "focal ratios f_u, f_v must be positive");
  }
  d_x_ = f / f_u;
  d_y_ = f / f_v;
}

ImagePoint pixel_to_image(const PixelPoint& p, const CameraIntrinsics& k) {
  return {(p.u - k.u0()) * k.d_x(), (p.v - k.v0()) * k.d_y()};
}

PixelPoint image_to_pixel(const ImagePoint& p, const CameraIntrinsics& k) {
  return {k.u0() + p.x / k.d_x(), k.v0() + p.y / k.d_y()};
}

Vec3 image_to_ccs(const ImagePoint& p, const CameraIntrinsics& k) {
  return {p.x, p.y, k.f()};
}

Line2D line_through(const ImagePoint& a, const ImagePoint& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (!(len > 1e-12)) {
    throw Error(ErrorKind::DegenerateLine, "line endpoints coincide");
  }
  double nx = -dy / len;
  double ny = dx / len;
  double rho = nx * a.x + ny * a.y;
  if (rho < 0.0) {
    nx = -nx;
    ny = -ny;
    rho = -rho;
  }
  double phi = std::atan2(ny, nx);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi -= 2.0 * std::numbers::pi;
  return {phi, rho};
}

ImagePoint intersect_lines(const Line2D& l1, const Line2D& l2) {
  const double c1 = std::cos(l1.phi), s1 = std::sin(l1.phi);
  const double c2 = std::cos(l2.phi), s2 = std::sin(l2.phi);
  const double det = c1 * s2 - s1 * c2;  // sin(phi2 - phi1)
  if (!(std::abs(det) > 1e-9)) {
    throw Error(ErrorKind::ParallelLines, "lines are parallel");
  }
  return {(l1.rho * s2 - l2.rho * s1) / det, (c1 * l2.rho - c2 * l1.rho) / det};
}

Plane3 lateral_plane(const ImagePoint& a, const ImagePoint& b,
                     const CameraIntrinsics& k) {
  if (!(std::hypot(b.x - a.x, b.y - a.y) > 1e-12)) {
    throw Error(ErrorKind::DegenerateLine, "lateral plane endpoints coincide");
  }
  const Vec3 n = image_to_ccs(a, k).cross(image_to_ccs(b, k));
  return {n.normalized()};
}

Mat3 rotation_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Mat3 rotation_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return r;
}

Mat3 rotation_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

Mat3 rotation_from_euler(const EulerAngles& e) {
  return rotation_z(e.psi) * rotation_y(e.theta) * rotation_x(e.phi);
}

PixelPoint project_vertex(const Vec3& p_w, const Mat3& r, const Vec3& t,
                          const CameraIntrinsics& k) {
  const Vec3 p_c = r.transpose() * (p_w - t);
  if (!(p_c.z() > k.f())) {
    throw Error(ErrorKind::BehindCamera, "point is not in front of the camera");
  }
  const double s = k.f() / p_c.z();
  return image_to_pixel({p_c.x() * s, p_c.y() * s}, k);
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(a + std::numbers::pi, two_pi);
  if (w <= 0.0) w += two_pi;
  return w - std::numbers::pi;
}

}  // namespace vp4l
