#include "grp/reference.hpp"

#include "grp/error.hpp"
#include "grp/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

namespace grp::reference {

PointCloud
passthrough(const PointCloud& cloud, const PassthroughBounds& bounds)
{
  bounds.validate();
  PointCloud out = cloud.like();
  for (const auto& p : cloud.points) {
    if (bounds.contains(p.position)) out.points.push_back(p);
  }
  return out;
}

PointCloud
voxel_downsample(const PointCloud& cloud, double leaf)
{
  if (!(leaf > 0.0) || !std::isfinite(leaf)) {
    throw Error(ErrorCode::NonPositiveLeaf, "voxel leaf must be > 0");
  }
  struct Acc {
    double x = 0, y = 0, z = 0;
    std::uint64_t r = 0, g = 0, b = 0, n = 0;
  };
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Acc> grid;
  for (const auto& p : cloud.points) {
    const CellIndex c = cell_of(p.position, leaf);
    auto& a = grid[{ c.z, c.y, c.x }];
    a.x += p.position.x;
    a.y += p.position.y;
    a.z += p.position.z;
    a.r += p.r;
    a.g += p.g;
    a.b += p.b;
    ++a.n;
  }
  PointCloud out = cloud.like();
  out.points.reserve(grid.size());
  for (const auto& [key, a] : grid) {
    ColorPoint p;
    const double n = static_cast<double>(a.n);
    p.position = { a.x / n, a.y / n, a.z / n };
    p.r = static_cast<std::uint8_t>((2 * a.r + a.n) / (2 * a.n));
    p.g = static_cast<std::uint8_t>((2 * a.g + a.n) / (2 * a.n));
    p.b = static_cast<std::uint8_t>((2 * a.b + a.n) / (2 * a.n));
    out.points.push_back(p);
  }
  return out;
}

PlaneModel
ransac_plane(const PointCloud& cloud, const RansacParams& params)
{
  params.validate();
  check_plane_preconditions(cloud);
  const auto candidates = sample_plane_candidates(cloud, params);

  const PlaneCandidate* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& c : candidates) {
    if (!c.valid) continue;
    std::size_t count = 0;
    for (const auto& p : cloud.points) {
      const double dist = c.normal.x * p.position.x + c.normal.y * p.position.y +
                          c.normal.z * p.position.z + c.offset;
      if (std::abs(dist) <= params.distance_threshold) ++count;
    }
    if (best == nullptr || count > best_count) {
      best = &c;
      best_count = count;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::NoPlaneFound, "every sampled triple was collinear");
  }
  if (static_cast<double>(best_count) / static_cast<double>(cloud.size()) <
      params.min_inlier_fraction) {
    throw Error(ErrorCode::NoPlaneFound, "best plane below min_inlier_fraction");
  }
  PlaneModel model;
  model.normal = best->normal;
  model.offset = best->offset;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (std::abs(model.signed_distance(cloud.points[i].position)) <= params.distance_threshold) {
      model.inliers.push_back(i);
    }
  }
  apply_refit(cloud, params, model);
  return model;
}

std::vector<Cluster>
euclidean_cluster(const PointCloud& cloud, const ClusterParams& params)
{
  params.validate();
  const std::size_t n = cloud.size();
  const SpatialIndex index = SpatialIndex::build(cloud);
  std::vector<bool> visited(n, false);
  std::vector<Cluster> clusters;
  std::vector<std::uint32_t> nb;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    Cluster c;
    std::deque<std::size_t> queue{ seed };
    visited[seed] = true;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      c.indices.push_back(cur);
      nb.clear();
      index.radius_neighbors(cloud.points[cur].position, params.tolerance, nb);
      for (const auto j : nb) {
        if (!visited[j]) {
          visited[j] = true;
          queue.push_back(j);
        }
      }
    }
    if (c.size() >= params.min_size && c.size() <= params.max_size) {
      std::sort(c.indices.begin(), c.indices.end());
      clusters.push_back(std::move(c));
    }
  }
  sort_clusters(clusters);
  return clusters;
}

} // namespace grp::reference
