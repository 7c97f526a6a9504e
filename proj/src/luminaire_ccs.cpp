#include "vp4l/luminaire_ccs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace vp4l {
namespace {

double cross2(const ImagePoint& o, const ImagePoint& a, const ImagePoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

OrderedCorners order_corners(std::span<const ImagePoint, 4> raw) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : raw) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::DegenerateQuad, "corner is not finite");
    }
    cx += p.x;
    cy += p.y;
  }
  cx /= 4.0;
  cy /= 4.0;

  std::array<std::pair<double, ImagePoint>, 4> keyed;
  for (std::size_t i = 0; i < 4; ++i) {
    double a = std::atan2(raw[i].y - cy, raw[i].x - cx);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    keyed[i] = {a, raw[i]};
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });

  OrderedCorners out;
  for (std::size_t i = 0; i < 4; ++i) out.p[i] = keyed[i].second;

  // Strict convexity: every consecutive turn has the same sign and is not
  // vanishingly small relative to the quad's scale.
  double scale = 0.0;
  for (const auto& p : out.p) scale = std::max(scale, std::hypot(p.x - cx, p.y - cy));
  const double tol = 1e-12 * scale * scale;
  int sign = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double t = cross2(out.p[i], out.p[(i + 1) % 4], out.p[(i + 2) % 4]);
    if (!(std::abs(t) > tol)) {
      throw Error(ErrorKind::DegenerateQuad, "corners are collinear or coincide");
    }
    const int s = t > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) {
      throw Error(ErrorKind::DegenerateQuad, "corners do not form a convex quadrilateral");
    }
    sign = s;
  }
  return out;
}

NormalDirection solve_normal_direction(const OrderedCorners& c,
                                       const CameraIntrinsics& k) {
  const Vec3 n12 = lateral_plane(c.p[0], c.p[1], k).normal;
  const Vec3 n23 = lateral_plane(c.p[1], c.p[2], k).normal;
  const Vec3 n34 = lateral_plane(c.p[2], c.p[3], k).normal;
  const Vec3 n41 = lateral_plane(c.p[3], c.p[0], k).normal;

  // det[(m,n,1), n34, n12] = (m,n,1) . (n34 x n12) = 0, likewise for 41/23.
  const Vec3 w1 = n34.cross(n12);
  const Vec3 w2 = n41.cross(n23);
  const double det = w1.x() * w2.y() - w1.y() * w2.x();
  if (!(std::abs(det) >= 1e-12)) {
    throw Error(ErrorKind::SingularConfiguration,
                "luminaire normal is undetermined (|det| < 1e-12)");
  }
  const double m = (-w1.z() * w2.y() + w2.z() * w1.y()) / det;
  const double n = (-w2.z() * w1.x() + w1.z() * w2.x()) / det;
  return {m, n};
}

Vec3 normal_ccs(double m, double n) {
  return Vec3(m, n, 1.0) / std::sqrt(m * m + n * n + 1.0);
}

LuminaireCcsEstimate vertices_ccs(const OrderedCorners& c, NormalDirection mn,
                                  double area, const CameraIntrinsics& k) {
  if (!(area > 0.0)) {
    throw Error(ErrorKind::ConfigError, "luminaire area must be positive");
  }
  std::array<Vec3, 4> lateral;  // lateral[i] is the plane through edge (i, i+1)
  for (std::size_t i = 0; i < 4; ++i) {
    lateral[i] = lateral_plane(c.p[i], c.p[(i + 1) % 4], k).normal;
  }

  const Vec3 plane(mn.m, mn.n, 1.0);
  std::array<Vec3, 4> scaled;  // M_Pi = c_led * P_i
  for (std::size_t i = 0; i < 4; ++i) {
    Mat3 a;
    a.row(0) = plane.transpose();
    a.row(1) = lateral[i].transpose();
    a.row(2) = lateral[(i + 3) % 4].transpose();
    if (!(std::abs(a.determinant()) >= 1e-12)) {
      throw Error(ErrorKind::SingularConfiguration,
                  "vertex planes do not intersect in a point");
    }
    scaled[i] = a.partialPivLu().solve(Vec3::UnitX());
  }

  // q_i: pyramid on three consecutive corners, omitting the fourth.
  double q_sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    Mat3 mq;
    mq.row(0) = scaled[i].transpose();
    mq.row(1) = scaled[(i + 1) % 4].transpose();
    mq.row(2) = scaled[(i + 2) % 4].transpose();
    q_sum += std::abs(mq.determinant()) / 6.0;
  }
  if (!(q_sum > 1e-18)) {
    throw Error(ErrorKind::NonPositiveVolume, "pyramid volume vanishes");
  }

  const double norm = std::sqrt(mn.m * mn.m + mn.n * mn.n + 1.0);
  const double c_led = std::sqrt(3.0 * q_sum * norm / (2.0 * area));

  LuminaireCcsEstimate out;
  out.normal = plane / norm;
  out.m = mn.m;
  out.n = mn.n;
  out.c_led = c_led;
  for (std::size_t i = 0; i < 4; ++i) out.vertices[i] = scaled[i] / c_led;
  out.distance = 1.0 / (c_led * norm);
  out.corners = c;
  return out;
}

LuminaireCcsEstimate estimate_luminaire_ccs(std::span<const PixelPoint, 4> pixels,
                                            double area,
                                            const CameraIntrinsics& k) {
  std::array<ImagePoint, 4> img;
  for (std::size_t i = 0; i < 4; ++i) img[i] = pixel_to_image(pixels[i], k);
  const OrderedCorners c = order_corners(std::span<const ImagePoint, 4>(img));
  return vertices_ccs(c, solve_normal_direction(c, k), area, k);
}

}  // namespace vp4l
