#pragma once

// Serial reference versions of the data-parallel kernels. They follow the
// textbook formulation of each step and exist so tests and the benchmark can
// compare the OpenMP kernels against them; the pipeline never calls them.

#include "grp/cloud.hpp"
#include "grp/clustering.hpp"
#include "grp/plane.hpp"

#include <vector>

namespace grp::reference {

PointCloud passthrough(const PointCloud& cloud, const PassthroughBounds& bounds);

/// Ordered-map voxel grid: one accumulator per (z, y, x) cell.
PointCloud voxel_downsample(const PointCloud& cloud, double leaf);

/// One candidate at a time, best kept on strictly greater inlier count.
PlaneModel ransac_plane(const PointCloud& cloud, const RansacParams& params);

/// Breadth-first region growing with on-the-fly kd-tree queries.
std::vector<Cluster> euclidean_cluster(const PointCloud& cloud, const ClusterParams& params);

} // namespace grp::reference
