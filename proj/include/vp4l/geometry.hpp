#pragma once

// Coordinate systems and pinhole camera model.
//
//   pixel frame (u, v)    origin at the top-left image corner, pixels
//   image frame (x, y)    origin at the principal point, meters
//   camera frame          optical center at the origin, image plane at z = f
//   world frame           P_w = R * P_c + t
//
// The pixel, image and camera x/y axes are parallel.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "vp4l/error.hpp"

namespace vp4l {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class CameraIntrinsics {
 public:
  /// Throws ConfigError unless f, f_u and f_v are finite and positive.
  CameraIntrinsics(double u0, double v0, double f, double f_u, double f_v);

  double u0() const { return u0_; }
  double v0() const { return v0_; }
  double f() const { return f_; }
  double f_u() const { return f_u_; }
  double f_v() const { return f_v_; }
  /// Physical pixel pitch in meters per pixel.
  double d_x() const { return d_x_; }
  double d_y() const { return d_y_; }

 private:
  double u0_, v0_, f_, f_u_, f_v_;
  double d_x_, d_y_;
};

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

struct ImagePoint {
  double x = 0.0;
  double y = 0.0;
};

/// x*cos(phi) + y*sin(phi) = rho, with rho >= 0 and phi in [0, 2*pi).
struct Line2D {
  double phi = 0.0;
  double rho = 0.0;
};

/// Plane through the camera optical center, stored with a unit normal.
struct Plane3 {
  Vec3 normal = Vec3::UnitZ();
};

/// phi about x, theta about y, psi about z; R = Rz(psi) * Ry(theta) * Rx(phi).
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

ImagePoint pixel_to_image(const PixelPoint& p, const CameraIntrinsics& k);
PixelPoint image_to_pixel(const ImagePoint& p, const CameraIntrinsics& k);

/// Lifts an image point onto the image plane z = f of the camera frame.
Vec3 image_to_ccs(const ImagePoint& p, const CameraIntrinsics& k);

/// Throws DegenerateLine if the points are closer than 1e-12 m.
Line2D line_through(const ImagePoint& a, const ImagePoint& b);

/// Intersection of two image lines. Throws ParallelLines when
/// |sin(phi1 - phi2)| <= 1e-9.
ImagePoint intersect_lines(const Line2D& l1, const Line2D& l2);

/// Plane through the optical center and the back-projections of a and b.
/// The normal is ray(a) x ray(b), normalized.
Plane3 lateral_plane(const ImagePoint& a, const ImagePoint& b,
                     const CameraIntrinsics& k);

Mat3 rotation_x(double angle);
Mat3 rotation_y(double angle);
Mat3 rotation_z(double angle);
Mat3 rotation_from_euler(const EulerAngles& e);

/// Projects a world point through a camera with pose (R, t), R = R_c^w.
/// Throws BehindCamera if the camera-frame depth is <= f.
PixelPoint project_vertex(const Vec3& p_w, const Mat3& r, const Vec3& t,
                          const CameraIntrinsics& k);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace vp4l
