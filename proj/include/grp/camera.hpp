#pragma once

#include "grp/geometry.hpp"

#include <array>

namespace grp {

/// Pinhole RGB camera plus the rigid transform from the depth frame into
/// the RGB frame: q = rotation * p + translation.
struct CameraModel {
  double fi = 525.0;
  double fj = 525.0;
  double ci = 319.5;
  double cj = 239.5;
  std::array<double, 9> rotation{ 1, 0, 0, 0, 1, 0, 0, 0, 1 }; // row-major
  Point3 translation;
  int width = 640;
  int height = 480;

  void validate() const;

  Point3 to_rgb_frame(const Point3& p) const noexcept {
    const auto& r = rotation;
    return { r[0] * p.x + r[1] * p.y + r[2] * p.z + translation.x,
             r[3] * p.x + r[4] * p.y + r[5] * p.z + translation.y,
             r[6] * p.x + r[7] * p.y + r[8] * p.z + translation.z };
  }

  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

struct PixelCoord {
  double i = 0.0; // column
  double j = 0.0; // row
};

/// Minimum depth in front of the RGB camera for a point to project.
inline constexpr double kMinProjectDepth = 1e-6;

/// Throws BehindCamera when the transformed depth is <= 1e-6 m.
PixelCoord project_point(const CameraModel& camera, const Point3& p);

/// Non-throwing variant; false when the point is behind the camera.
bool try_project(const CameraModel& camera, const Point3& p, PixelCoord& out) noexcept;

} // namespace grp
