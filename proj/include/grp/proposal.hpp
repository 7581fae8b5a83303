#pragma once

#include "grp/camera.hpp"
#include "grp/cloud.hpp"
#include "grp/clustering.hpp"
#include "grp/plane.hpp"

#include <optional>
#include <string>
#include <vector>

namespace grp {

/// Axis-aligned extents of a cluster plus the two front-face corners
/// U = (x_min, y_max, z_max) and L = (x_max, y_min, z_max).
struct BBox3 {
  Point3 min;
  Point3 max;
  Point3 upper;
  Point3 lower;

  Point3 center() const noexcept { return 0.5 * (min + max); }
  bool contains(const Point3& p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  /// Box from extents; fills U and L from them.
  static BBox3 from_extents(const Point3& min, const Point3& max) noexcept;
};

/// Half-open pixel rectangle [u_min, u_max) x [v_min, v_max).
struct BBox2 {
  int u_min = 0;
  int v_min = 0;
  int u_max = 0;
  int v_max = 0;

  int width() const noexcept { return u_max - u_min; }
  int height() const noexcept { return v_max - v_min; }
  friend bool operator==(const BBox2&, const BBox2&) = default;
};

struct Proposal {
  BBox3 bbox3;
  Point3 centroid;
  BBox2 bbox2; // expanded and clamped
  std::size_t cluster_size = 0;
};

/// Wall-clock time spent in each proposal stage, milliseconds.
struct StageTimings {
  double downsample_ms = 0.0; // voxel grid + passthrough
  double plane_ms = 0.0;      // RANSAC + split
  double cluster_ms = 0.0;
  double project_ms = 0.0;    // boxes, centroids, projection, expansion
  double classify_ms = 0.0;   // filled by detect()

  double proposal_total_ms() const noexcept {
    return downsample_ms + plane_ms + cluster_ms + project_ms;
  }
};

/// Passthrough box around the standard synthetic table.
PassthroughBounds default_table_bounds();

struct PipelineConfig {
  /// Exactly one of leaf / alpha is set. alpha is resolved to a leaf per
  /// call through calibrate_leaf.
  std::optional<double> leaf;
  std::optional<double> alpha = 0.1;
  bool passthrough_enabled = true;
  PassthroughBounds passthrough = default_table_bounds();
  RansacParams ransac;
  ClusterParams cluster;
  double border_fraction = 0.4;
  /// "baseline:<model path>" or "tcp:<host>:<port>"
  std::string classifier = "baseline";
  CameraModel camera;

  void validate() const;

  /// Leaf used for `cloud`: the fixed leaf, or the calibrated one for alpha.
  double resolve_leaf(const PointCloud& cloud) const;

  /// Copy with alpha replaced by the leaf calibrated on `cloud`.
  PipelineConfig with_fixed_leaf(const PointCloud& cloud) const;
};

struct ProposalSet {
  std::vector<Proposal> proposals;
  std::size_t dropped_projection = 0; // clusters whose 2D box failed
  std::size_t downsampled_points = 0;
  std::size_t plane_inliers = 0;
  double leaf = 0.0;
  StageTimings timings;
};

BBox3 bbox3_of(const PointCloud& cloud, const Cluster& cluster);
Point3 centroid_of(const PointCloud& cloud, const Cluster& cluster);

/// Projects the 8 extent corners, keeps those in front of the camera, clamps
/// to the image and rounds outward (floor mins, ceil maxes).
BBox2 project_bbox(const CameraModel& camera, const BBox3& box);

/// Grows width and height by `fraction` about the box center, then clamps
/// to the image and rounds outward.
BBox2 expand_bbox(const BBox2& box, double fraction, const CameraModel& camera);

/// Geometric region proposal: downsample, optional passthrough, RANSAC
/// table removal, Euclidean clustering, and per-cluster boxes.
ProposalSet propose_regions(const PointCloud& cloud, const CameraModel& camera,
                            const PipelineConfig& config);

inline ProposalSet
propose_regions(const PointCloud& cloud, const PipelineConfig& config)
{
  return propose_regions(cloud, config.camera, config);
}

} // namespace grp
