#include "grp/proposal.hpp"

#include "grp/error.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

namespace grp {

namespace {

using Clock = std::chrono::steady_clock;

double
elapsed_ms(Clock::time_point from, Clock::time_point to)
{
  return std::chrono::duration<double, std::milli>(to - from).count();
}

BBox2
clamp_round(double u0, double v0, double u1, double v1, const CameraModel& camera)
{
  const double w = camera.width;
  const double h = camera.height;
  u0 = std::clamp(u0, 0.0, w);
  u1 = std::clamp(u1, 0.0, w);
  v0 = std::clamp(v0, 0.0, h);
  v1 = std::clamp(v1, 0.0, h);
  return { static_cast<int>(std::floor(u0)), static_cast<int>(std::floor(v0)),
           static_cast<int>(std::ceil(u1)), static_cast<int>(std::ceil(v1)) };
}

} // namespace

BBox3
BBox3::from_extents(const Point3& lo, const Point3& hi) noexcept
{
  return { lo, hi, { lo.x, hi.y, hi.z }, { hi.x, lo.y, hi.z } };
}

PassthroughBounds
default_table_bounds()
{
  PassthroughBounds b;
  b.x = { -0.6, 0.6 };
  b.y = { -0.45, 0.45 };
  b.z = { 0.3, 1.15 };
  return b;
}

void
PipelineConfig::validate() const
{
  if (leaf.has_value() == alpha.has_value()) {
    throw Error(ErrorCode::InvalidConfig, "set exactly one of leaf and alpha");
  }
  if (leaf && !(*leaf > 0.0)) {
    throw Error(ErrorCode::NonPositiveLeaf, "leaf must be > 0");
  }
  if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1]");
  }
  if (passthrough_enabled) passthrough.validate();
  ransac.validate();
  cluster.validate();
  if (!(border_fraction >= 0.0) || !std::isfinite(border_fraction)) {
    throw Error(ErrorCode::InvalidConfig, "border fraction must be >= 0");
  }
  camera.validate();
}

double
PipelineConfig::resolve_leaf(const PointCloud& cloud) const
{
  if (leaf) return *leaf;
  return calibrate_leaf(cloud, alpha.value_or(0.1)).leaf;
}

PipelineConfig
PipelineConfig::with_fixed_leaf(const PointCloud& cloud) const
{
  PipelineConfig out = *this;
  out.leaf = resolve_leaf(cloud);
  out.alpha.reset();
  return out;
}

BBox3
bbox3_of(const PointCloud& cloud, const Cluster& cluster)
{
  if (cluster.indices.empty()) {
    throw Error(ErrorCode::EmptyCluster, "cannot box an empty cluster");
  }
  Point3 lo = cloud.points.at(cluster.indices.front()).position;
  Point3 hi = lo;
  for (const auto idx : cluster.indices) {
    const auto& p = cloud.points.at(idx).position;
    lo = { std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z) };
    hi = { std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z) };
  }
  return BBox3::from_extents(lo, hi);
}

Point3
centroid_of(const PointCloud& cloud, const Cluster& cluster)
{
  if (cluster.indices.empty()) {
    throw Error(ErrorCode::EmptyCluster, "cannot take the centroid of an empty cluster");
  }
  Point3 sum;
  for (const auto idx : cluster.indices) sum += cloud.points.at(idx).position;
  const double n = static_cast<double>(cluster.indices.size());
  return { sum.x / n, sum.y / n, sum.z / n };
}

BBox2
project_bbox(const CameraModel& camera, const BBox3& box)
{
  double u0 = std::numeric_limits<double>::infinity();
  double v0 = u0;
  double u1 = -u0;
  double v1 = -u0;
  int projected = 0;
  for (int corner = 0; corner < 8; ++corner) {
    const Point3 p{ (corner & 1) ? box.max.x : box.min.x,
                    (corner & 2) ? box.max.y : box.min.y,
                    (corner & 4) ? box.max.z : box.min.z };
    PixelCoord px;
    if (!try_project(camera, p, px)) continue;
    ++projected;
    u0 = std::min(u0, px.i);
    u1 = std::max(u1, px.i);
    v0 = std::min(v0, px.j);
    v1 = std::max(v1, px.j);
  }
  if (projected == 0) {
    throw Error(ErrorCode::FullyBehindCamera, "no box corner lies in front of the camera");
  }
  const BBox2 out = clamp_round(u0, v0, u1, v1, camera);
  if (static_cast<long long>(out.width()) * out.height() < 1) {
    throw Error(ErrorCode::DegenerateProjection, "projected box has no area inside the image");
  }
  return out;
}

BBox2
expand_bbox(const BBox2& box, double fraction, const CameraModel& camera)
{
  if (!(fraction >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "border fraction must be >= 0");
  }
  const double cu = 0.5 * (box.u_min + box.u_max);
  const double cv = 0.5 * (box.v_min + box.v_max);
  const double half_w = 0.5 * (1.0 + fraction) * box.width();
  const double half_h = 0.5 * (1.0 + fraction) * box.height();
  return clamp_round(cu - half_w, cv - half_h, cu + half_w, cv + half_h, camera);
}

ProposalSet
propose_regions(const PointCloud& cloud, const CameraModel& camera, const PipelineConfig& config)
{
  config.validate();
  camera.validate();
  if (cloud.empty()) {
    throw Error(ErrorCode::EmptyCloud, "cannot propose regions on an empty cloud");
  }
  ProposalSet out;
  const auto t0 = Clock::now();
  out.leaf = config.resolve_leaf(cloud);
  PointCloud reduced = voxel_downsample(cloud, out.leaf);
  if (config.passthrough_enabled) reduced = passthrough(reduced, config.passthrough);
  out.downsampled_points = reduced.size();
  const auto t1 = Clock::now();

  const PlaneModel table = ransac_plane(reduced, config.ransac);
  out.plane_inliers = table.inliers.size();
  const PlaneSplit split = split_plane(reduced, table);
  const auto t2 = Clock::now();

  const std::vector<Cluster> clusters = euclidean_cluster(split.outliers, config.cluster);
  const auto t3 = Clock::now();

  const PointCloud& objects = split.outliers;
  std::vector<std::optional<Proposal>> slots(clusters.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(clusters.size()); ++k) {
    const Cluster& c = clusters[k];
    Proposal p;
    p.bbox3 = bbox3_of(objects, c);
    p.centroid = centroid_of(objects, c);
    p.cluster_size = c.size();
    try {
      p.bbox2 = expand_bbox(project_bbox(camera, p.bbox3), config.border_fraction, camera);
      slots[k] = p;
    } catch (const Error&) {
      // dropped and tallied below
    }
  }
  for (auto& s : slots) {
    if (s) out.proposals.push_back(*s);
    else ++out.dropped_projection;
  }
  const auto t4 = Clock::now();

  out.timings.downsample_ms = elapsed_ms(t0, t1);
  out.timings.plane_ms = elapsed_ms(t1, t2);
  out.timings.cluster_ms = elapsed_ms(t2, t3);
  out.timings.project_ms = elapsed_ms(t3, t4);
  return out;
}

} // namespace grp
