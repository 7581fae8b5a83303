#pragma once

#include "grp/cloud.hpp"

#include <cstdint>
#include <vector>

namespace grp {

/// Plane n·p + d = 0 with a unit normal in canonical sign, plus the indices
/// of the cloud points within the fitting threshold.
struct PlaneModel {
  Point3 normal{ 0.0, 0.0, -1.0 };
  double offset = 0.0;
  std::vector<std::size_t> inliers;

  double signed_distance(const Point3& p) const noexcept {
    return normal.x * p.x + normal.y * p.y + normal.z * p.z + offset;
  }
};

struct RansacParams {
  double distance_threshold = 0.01;
  int max_iterations = 500;
  double min_inlier_fraction = 0.15;
  std::uint64_t seed = 0;
  // one least-squares pass over the winner's inliers, then inliers are recounted
  bool refit = false;

  void validate() const;
};

/// Flips (normal, offset) so that normal.z < 0; when |normal.z| < 1e-12 the
/// y component decides, then x.
void canonicalize(Point3& normal, double& offset) noexcept;

/// Best three-point plane over `max_iterations` SplitMix64 samples. The
/// winner is the model with the most inliers; ties keep the earliest
/// iteration. Candidate scoring runs in parallel.
PlaneModel ransac_plane(const PointCloud& cloud, const RansacParams& params);

struct PlaneSplit {
  PointCloud inliers;
  PointCloud outliers;
};

PlaneSplit split_plane(const PointCloud& cloud, const PlaneModel& plane);

/// Candidate plane through three sampled points; `valid` is false for a
/// collinear (or coincident) sample.
struct PlaneCandidate {
  Point3 normal;
  double offset = 0.0;
  bool valid = false;
};

/// Draws the candidate sequence exactly as ransac_plane does. Exposed so the
/// serial reference and the parallel kernel share one sampling path.
std::vector<PlaneCandidate> sample_plane_candidates(const PointCloud& cloud,
                                                    const RansacParams& params);

/// Total least-squares plane through the indexed points (smallest
/// eigenvector of their covariance), canonical sign. Inliers left empty.
PlaneModel fit_plane_least_squares(const PointCloud& cloud, const std::vector<std::size_t>& indices);

/// Refits `model` when params.refit is set and recounts its inliers.
void apply_refit(const PointCloud& cloud, const RansacParams& params, PlaneModel& model);

/// Throws DegenerateCloud for < 3 points or an (almost) collinear cloud.
void check_plane_preconditions(const PointCloud& cloud);

} // namespace grp
