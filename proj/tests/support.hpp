#pragma once

#include <array>

#include "oracle.hpp"
#include "vp4l/pose_basic.hpp"

namespace support {

inline vp4l::Vec3 vec(const oracle::V3& v) { return {v[0], v[1], v[2]}; }

inline vp4l::CameraIntrinsics intrinsics(const oracle::Camera& c = {}) {
  return {c.u0, c.v0, c.f, c.fu, c.fv};
}

inline vp4l::LuminaireSpec spec(const std::array<oracle::V3, 4>& v) {
  return vp4l::LuminaireSpec({vec(v[0]), vec(v[1]), vec(v[2]), vec(v[3])});
}

inline std::array<vp4l::PixelPoint, 4> pixels(const std::array<oracle::V3, 4>& v,
                                              const oracle::Pose& pose,
                                              const oracle::Camera& cam = {}) {
  std::array<vp4l::PixelPoint, 4> out;
  for (int i = 0; i < 4; ++i) {
    const auto px = oracle::pixel(oracle::to_camera(v[i], pose), cam);
    out[i] = {px[0], px[1]};
  }
  return out;
}

inline const oracle::V3 kCenter{2.5, 2.5, 3.0};

}  // namespace support
