#pragma once

// Luminaire plane and corner positions in the camera frame, recovered from the
// four projected corners and the known luminaire area.

#include <array>
#include <span>

#include "vp4l/geometry.hpp"

namespace vp4l {

/// Four image points in counter-clockwise cyclic order, so that edges
/// (p1,p2)/(p3,p4) and (p2,p3)/(p4,p1) are the images of opposite sides.
struct OrderedCorners {
  std::array<ImagePoint, 4> p;
};

/// Luminaire plane m*x + n*y + z = 1/c_led in the camera frame.
struct NormalDirection {
  double m = 0.0;
  double n = 0.0;
};

struct LuminaireCcsEstimate {
  Vec3 normal;     ///< unit, z component > 0
  double m = 0.0;
  double n = 0.0;
  double c_led = 0.0;
  /// Corners in the same cyclic order as the OrderedCorners they came from.
  std::array<Vec3, 4> vertices;
  /// Distance from the optical center to the luminaire plane.
  double distance = 0.0;
  OrderedCorners corners;
};

/// Sorts four points by polar angle in [0, 2*pi) about their centroid.
/// Throws DegenerateQuad on duplicates, collinear triples or non-convexity.
OrderedCorners order_corners(std::span<const ImagePoint, 4> raw);

/// Solves the two parallel-edge constraints for (m, n).
/// Throws SingularConfiguration if the 2x2 system has |det| < 1e-12.
NormalDirection solve_normal_direction(const OrderedCorners& c,
                                       const CameraIntrinsics& k);

Vec3 normal_ccs(double m, double n);

/// Recovers the camera-frame corners. `area` is the luminaire area in m^2.
/// Throws SingularConfiguration or NonPositiveVolume.
LuminaireCcsEstimate vertices_ccs(const OrderedCorners& c, NormalDirection mn,
                                  double area, const CameraIntrinsics& k);

/// pixel_to_image -> order_corners -> solve_normal_direction -> vertices_ccs.
LuminaireCcsEstimate estimate_luminaire_ccs(std::span<const PixelPoint, 4> pixels,
                                            double area,
                                            const CameraIntrinsics& k);

}  // namespace vp4l
