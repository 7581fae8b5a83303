#pragma once

#include "grp/cloud.hpp"

#include <vector>

namespace grp {

struct ClusterParams {
  double tolerance = 0.02;
  std::size_t min_size = 50;
  std::size_t max_size = 25000;

  void validate() const;
};

/// Indices into the clustered cloud, unique and ascending.
struct Cluster {
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return indices.size(); }
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Connected components of the graph joining points at distance
/// <= tolerance, restricted to components of size in [min_size, max_size],
/// ordered by (size desc, smallest index asc). Neighbor lists are gathered
/// in parallel; components are then merged with a union-find.
std::vector<Cluster> euclidean_cluster(const PointCloud& cloud, const ClusterParams& params);

/// Sorts clusters into the canonical (size desc, smallest index asc) order.
void sort_clusters(std::vector<Cluster>& clusters);

} // namespace grp
