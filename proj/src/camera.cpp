#include "grp/camera.hpp"

#include "grp/error.hpp"

#include <cmath>

namespace grp {

void
CameraModel::validate() const
{
  if (!(fi > 0.0) || !(fj > 0.0)) {
    throw Error(ErrorCode::InvalidCamera, "focal lengths must be > 0");
  }
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidCamera, "image size must be positive");
  }
  if (!(ci > 0.0 && ci < width) || !(cj > 0.0 && cj < height)) {
    throw Error(ErrorCode::InvalidCamera, "principal point must lie inside the image");
  }
  // R^T R = I
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += rotation[3 * k + a] * rotation[3 * k + b];
      if (std::abs(s - (a == b ? 1.0 : 0.0)) > 1e-9) {
        throw Error(ErrorCode::InvalidCamera, "rotation is not orthonormal");
      }
    }
  }
  if (!is_finite(translation)) {
    throw Error(ErrorCode::InvalidCamera, "translation must be finite");
  }
}

bool
try_project(const CameraModel& camera, const Point3& p, PixelCoord& out) noexcept
{
  const Point3 q = camera.to_rgb_frame(p);
  if (!(q.z > kMinProjectDepth)) return false;
  out.i = camera.fi * q.x / q.z + camera.ci;
  out.j = camera.fj * q.y / q.z + camera.cj;
  return true;
}

PixelCoord
project_point(const CameraModel& camera, const Point3& p)
{
  PixelCoord out;
  if (!try_project(camera, p, out)) {
    throw Error(ErrorCode::BehindCamera, "point is not in front of the RGB camera");
  }
  return out;
}

} // namespace grp
