#include "grp/spatial_index.hpp"

#include "grp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grp {

SpatialIndex::SpatialIndex(std::span<const Point3> points)
  : points_(points.begin(), points.end())
  , ids_(points.size())
{
  std::iota(ids_.begin(), ids_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * (points_.size() / kLeafBucket + 1));
    build_node(0, static_cast<std::uint32_t>(points_.size()));
  }
}

SpatialIndex
SpatialIndex::build(const PointCloud& cloud)
{
  std::vector<Point3> pts(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) pts[i] = cloud.points[i].position;
  return SpatialIndex(pts);
}

std::int32_t
SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end)
{
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = node.hi = points_[begin];
  for (std::uint32_t k = begin + 1; k < end; ++k) {
    const auto& p = points_[k];
    node.lo = { std::min(node.lo.x, p.x), std::min(node.lo.y, p.y), std::min(node.lo.z, p.z) };
    node.hi = { std::max(node.hi.x, p.x), std::max(node.hi.y, p.y), std::max(node.hi.z, p.z) };
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafBucket) return id;

  const Point3 ext = node.hi - node.lo;
  int axis = 0;
  if (ext.y > ext.x && ext.y >= ext.z) axis = 1;
  else if (ext.z > ext.x && ext.z > ext.y) axis = 2;
  if (std::max({ ext.x, ext.y, ext.z }) <= 0.0) return id; // all coincident

  const auto coord = [axis](const Point3& p) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
  };
  const std::uint32_t mid = begin + (end - begin) / 2;
  // permute points and ids together
  std::vector<std::uint32_t> perm(end - begin);
  std::iota(perm.begin(), perm.end(), begin);
  std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = coord(points_[a]);
                     const double cb = coord(points_[b]);
                     return ca < cb || (ca == cb && ids_[a] < ids_[b]);
                   });
  std::vector<Point3> p_tmp(perm.size());
  std::vector<std::uint32_t> id_tmp(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    p_tmp[k] = points_[perm[k]];
    id_tmp[k] = ids_[perm[k]];
  }
  std::copy(p_tmp.begin(), p_tmp.end(), points_.begin() + begin);
  std::copy(id_tmp.begin(), id_tmp.end(), ids_.begin() + begin);

  const auto left = build_node(begin, mid);
  const auto right = build_node(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void
SpatialIndex::query(std::int32_t node_id, const Point3& seed, double r2,
                    std::vector<std::uint32_t>& out) const
{
  const Node& node = nodes_[node_id];
  // distance from seed to the node box; monotone rounding keeps this a lower
  // bound on every member's computed distance
  double box2 = 0.0;
  const auto acc = [&box2](double q, double lo, double hi) {
    if (q < lo) {
      const double d = lo - q;
      box2 += d * d;
    } else if (q > hi) {
      const double d = q - hi;
      box2 += d * d;
    }
  };
  acc(seed.x, node.lo.x, node.hi.x);
  acc(seed.y, node.lo.y, node.hi.y);
  acc(seed.z, node.lo.z, node.hi.z);
  if (box2 > r2) return;

  if (node.left < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      if (squared_distance(points_[k], seed) <= r2) out.push_back(ids_[k]);
    }
    return;
  }
  query(node.left, seed, r2, out);
  query(node.right, seed, r2, out);
}

std::size_t
SpatialIndex::radius_neighbors(const Point3& seed, double radius,
                               std::vector<std::uint32_t>& out) const
{
  if (radius < 0.0 || std::isnan(radius)) {
    throw Error(ErrorCode::NegativeRadius, "radius must be >= 0");
  }
  const std::size_t before = out.size();
  if (!nodes_.empty()) query(0, seed, radius * radius, out);
  return out.size() - before;
}

std::vector<std::size_t>
SpatialIndex::radius_neighbors(const Point3& seed, double radius) const
{
  std::vector<std::uint32_t> raw;
  radius_neighbors(seed, radius, raw);
  std::sort(raw.begin(), raw.end());
  return { raw.begin(), raw.end() };
}

} // namespace grp
