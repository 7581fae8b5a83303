#pragma once

#include "grp/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace grp {

struct ColorPoint {
  Point3 position;
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const ColorPoint&, const ColorPoint&) = default;
};

/// An unorganized cloud. Point order is significant: it is preserved by
/// every filter and by PCD round-trips.
struct PointCloud {
  std::vector<ColorPoint> points;
  std::string frame_id = "camera_optical";
  double timestamp = 0.0;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  /// A cloud with the same frame metadata and no points.
  PointCloud like() const { return PointCloud{ {}, frame_id, timestamp }; }
};

/// Closed interval on one axis; either end may be open.
struct AxisBounds {
  std::optional<double> min;
  std::optional<double> max;

  bool contains(double v) const noexcept {
    return (!min || v >= *min) && (!max || v <= *max);
  }
};

struct PassthroughBounds {
  AxisBounds x;
  AxisBounds y;
  AxisBounds z;

  /// Throws InvalidBounds when a present pair has min >= max.
  void validate() const;

  bool contains(const Point3& p) const noexcept {
    return x.contains(p.x) && y.contains(p.y) && z.contains(p.z);
  }

  static PassthroughBounds intersect(const PassthroughBounds& a,
                                     const PassthroughBounds& b);
};

/// Keeps the points whose coordinates fall in every present interval.
PointCloud passthrough(const PointCloud& cloud, const PassthroughBounds& bounds);

/// Integer grid cell containing a point: floor(coord / leaf) per axis.
struct CellIndex {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend auto operator<=>(const CellIndex& a, const CellIndex& b) noexcept {
    // canonical output order is (z, y, x)
    if (auto c = a.z <=> b.z; c != 0) return c;
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

CellIndex cell_of(const Point3& p, double leaf) noexcept;

/// Replaces every occupied leaf-sized cell by the centroid of its members
/// (colors averaged and rounded half-up). Output is sorted by
/// (cell z, cell y, cell x). Members are summed in ascending input order, so
/// the result does not depend on the thread count.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf);

/// Number of distinct occupied cells, i.e. voxel_downsample(cloud, leaf).size().
std::size_t count_occupied_cells(const PointCloud& cloud, double leaf);

struct LeafCalibration {
  double leaf = 0.0;
  double ratio = 0.0; // output / input point count at `leaf`
  int iterations = 0;
  bool converged = false;
};

/// Searches [1e-4, 1] m for a leaf whose reduction ratio lies within 20% of
/// `alpha`. Bisection runs on log(leaf) for at most 32 steps; when the band is
/// unreachable the closest endpoint is returned with converged = false.
LeafCalibration calibrate_leaf(const PointCloud& cloud, double alpha);

inline constexpr double kMinLeaf = 1e-4;
inline constexpr double kMaxLeaf = 1.0;
inline constexpr int kMaxCalibrationSteps = 32;

} // namespace grp
