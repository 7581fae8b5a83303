#include "grp/clustering.hpp"

#include "grp/error.hpp"
#include "grp/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grp {

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  // the smaller root wins so representatives are component minima
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

private:
  std::vector<std::uint32_t> parent_;
};

} // namespace

void
ClusterParams::validate() const
{
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw Error(ErrorCode::InvalidParams, "cluster tolerance must be > 0");
  }
  if (min_size < 1 || min_size > max_size) {
    throw Error(ErrorCode::InvalidParams, "cluster sizes need 1 <= min_size <= max_size");
  }
}

void
sort_clusters(std::vector<Cluster>& clusters)
{
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.indices.front() < b.indices.front();
  });
}

std::vector<Cluster>
euclidean_cluster(const PointCloud& cloud, const ClusterParams& params)
{
  params.validate();
  const std::size_t n = cloud.size();
  if (n == 0) return {};

  const SpatialIndex index = SpatialIndex::build(cloud);
  std::vector<std::vector<std::uint32_t>> neighbors(n);
  const auto* pts = cloud.points.data();
  const double tol = params.tolerance;

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    auto& nb = neighbors[i];
    index.radius_neighbors(pts[i].position, tol, nb);
    // keep each undirected edge once
    std::erase_if(nb, [i](std::uint32_t j) { return j <= static_cast<std::uint32_t>(i); });
  }

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto j : neighbors[i]) sets.unite(static_cast<std::uint32_t>(i), j);
  }

  std::vector<std::uint32_t> root(n);
  std::vector<std::size_t> comp_size(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    root[i] = sets.find(static_cast<std::uint32_t>(i));
    ++comp_size[root[i]];
  }
  std::vector<std::int64_t> slot(n, -1);
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = root[i];
    const auto sz = comp_size[r];
    if (sz < params.min_size || sz > params.max_size) continue;
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(clusters.size());
      clusters.emplace_back();
      clusters.back().indices.reserve(sz);
    }
    clusters[static_cast<std::size_t>(slot[r])].indices.push_back(i);
  }
  sort_clusters(clusters);
  return clusters;
}

} // namespace grp
