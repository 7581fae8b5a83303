#pragma once

#include "grp/cloud.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace grp {

/// Static 3D kd-tree answering closed-ball radius queries
/// (||p - seed||^2 <= radius^2). Immutable after construction, so concurrent
/// queries are safe.
class SpatialIndex {
public:
  SpatialIndex() = default;
  explicit SpatialIndex(std::span<const Point3> points);

  static SpatialIndex build(const PointCloud& cloud);

  /// Indices of all indexed points within `radius` of `seed`, ascending.
  std::vector<std::size_t> radius_neighbors(const Point3& seed, double radius) const;

  /// Appends matches to `out` in tree order (unsorted). Returns the count.
  std::size_t radius_neighbors(const Point3& seed, double radius,
                               std::vector<std::uint32_t>& out) const;

  std::size_t size() const noexcept { return points_.size(); }

private:
  struct Node {
    Point3 lo;
    Point3 hi;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
  void query(std::int32_t node, const Point3& seed, double r2,
             std::vector<std::uint32_t>& out) const;

  std::vector<Point3> points_;        // permuted into leaf order
  std::vector<std::uint32_t> ids_;    // original index of points_[k]
  std::vector<Node> nodes_;
};

inline constexpr std::uint32_t kLeafBucket = 16;

} // namespace grp
