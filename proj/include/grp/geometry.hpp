#pragma once

#include <cmath>

namespace grp {

/// A position in the sensor's optical frame, meters
/// (x right, y down, z forward).
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;

  Point3& operator+=(const Point3& o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Point3& operator-=(const Point3& o) noexcept {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  friend Point3 operator+(Point3 a, const Point3& b) noexcept { return a += b; }
  friend Point3 operator-(Point3 a, const Point3& b) noexcept { return a -= b; }
  friend Point3 operator*(double s, const Point3& p) noexcept {
    return { s * p.x, s * p.y, s * p.z };
  }
  friend Point3 operator-(const Point3& p) noexcept { return { -p.x, -p.y, -p.z }; }
};

inline double dot(const Point3& a, const Point3& b) noexcept {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Point3 cross(const Point3& a, const Point3& b) noexcept {
  return { a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x };
}

inline double norm(const Point3& p) noexcept { return std::sqrt(dot(p, p)); }

inline double squared_distance(const Point3& a, const Point3& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

inline bool is_finite(const Point3& p) noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

} // namespace grp
