#include "grp/plane.hpp"

#include "grp/error.hpp"
#include "grp/rng.hpp"

#include <array>
#include <cmath>
#include <string>

namespace grp {

void
RansacParams::validate() const
{
  if (!(distance_threshold > 0.0) || !std::isfinite(distance_threshold)) {
    throw Error(ErrorCode::InvalidParams, "ransac distance_threshold must be > 0");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::InvalidParams, "ransac max_iterations must be >= 1");
  }
  if (!(min_inlier_fraction > 0.0 && min_inlier_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "ransac min_inlier_fraction must lie in (0, 1]");
  }
}

void
canonicalize(Point3& normal, double& offset) noexcept
{
  bool flip = false;
  if (std::abs(normal.z) >= 1e-12) flip = normal.z > 0.0;
  else if (std::abs(normal.y) >= 1e-12) flip = normal.y > 0.0;
  else flip = normal.x > 0.0;
  if (flip) {
    normal = -normal;
    offset = -offset;
  }
}

void
check_plane_preconditions(const PointCloud& cloud)
{
  const std::size_t n = cloud.size();
  if (n < 3) {
    throw Error(ErrorCode::DegenerateCloud,
                "plane fit needs >= 3 points, got " + std::to_string(n));
  }
  const Point3 a = cloud.points[0].position;
  std::size_t far = 0;
  double far_d2 = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d2 = squared_distance(cloud.points[i].position, a);
    if (d2 > far_d2) {
      far_d2 = d2;
      far = i;
    }
  }
  if (std::sqrt(far_d2) <= 1e-9) {
    throw Error(ErrorCode::DegenerateCloud, "all points coincide");
  }
  const Point3 axis = cloud.points[far].position - a;
  const double len = std::sqrt(far_d2);
  for (std::size_t i = 1; i < n; ++i) {
    const double off_line = norm(cross(cloud.points[i].position - a, axis)) / len;
    if (off_line > 1e-9) return;
  }
  throw Error(ErrorCode::DegenerateCloud, "all points are collinear");
}

std::vector<PlaneCandidate>
sample_plane_candidates(const PointCloud& cloud, const RansacParams& params)
{
  const std::size_t n = cloud.size();
  SplitMix64 rng(params.seed);
  std::vector<PlaneCandidate> out(static_cast<std::size_t>(params.max_iterations));
  for (auto& cand : out) {
    const std::size_t i0 = rng.index(n);
    std::size_t i1 = rng.index(n);
    while (i1 == i0) i1 = rng.index(n);
    std::size_t i2 = rng.index(n);
    while (i2 == i0 || i2 == i1) i2 = rng.index(n);

    const Point3& p0 = cloud.points[i0].position;
    const Point3 nrm = cross(cloud.points[i1].position - p0, cloud.points[i2].position - p0);
    const double len = norm(nrm);
    if (!(len > 1e-12)) continue;
    cand.normal = { nrm.x / len, nrm.y / len, nrm.z / len };
    cand.offset = -dot(cand.normal, p0);
    canonicalize(cand.normal, cand.offset);
    cand.valid = true;
  }
  return out;
}

PlaneModel
ransac_plane(const PointCloud& cloud, const RansacParams& params)
{
  params.validate();
  check_plane_preconditions(cloud);

  const std::size_t n = cloud.size();
  const auto candidates = sample_plane_candidates(cloud, params);

  // structure-of-arrays copy so the scoring loop vectorizes
  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = cloud.points[i].position.x;
    ys[i] = cloud.points[i].position.y;
    zs[i] = cloud.points[i].position.z;
  }
  const double thr = params.distance_threshold;
  const auto m = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<std::size_t> counts(candidates.size(), 0);

#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto& c = candidates[k];
    if (!c.valid) continue;
    const double a = c.normal.x, b = c.normal.y, cz = c.normal.z, d = c.offset;
    const double* px = xs.data();
    const double* py = ys.data();
    const double* pz = zs.data();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dist = a * px[i] + b * py[i] + cz * pz[i] + d;
      count += (std::abs(dist) <= thr) ? 1u : 0u;
    }
    counts[k] = count;
  }

  // selection: most inliers, earliest iteration on ties
  std::ptrdiff_t best = -1;
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    if (!candidates[k].valid) continue;
    if (best < 0 || counts[k] > counts[best]) best = k;
  }
  if (best < 0) {
    throw Error(ErrorCode::NoPlaneFound, "every sampled triple was collinear");
  }
  const double fraction = static_cast<double>(counts[best]) / static_cast<double>(n);
  if (fraction < params.min_inlier_fraction) {
    throw Error(ErrorCode::NoPlaneFound,
                "best plane holds " + std::to_string(counts[best]) + " of " +
                  std::to_string(n) + " points, below min_inlier_fraction");
  }

  PlaneModel model;
  model.normal = candidates[best].normal;
  model.offset = candidates[best].offset;
  model.inliers.reserve(counts[best]);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(model.signed_distance(cloud.points[i].position)) <= thr) {
      model.inliers.push_back(i);
    }
  }
  apply_refit(cloud, params, model);
  return model;
}

namespace {

// cyclic Jacobi on a symmetric 3x3; returns the eigenvector of the smallest eigenvalue
Point3
smallest_eigenvector(std::array<std::array<double, 3>, 3> a)
{
  std::array<std::array<double, 3>, 3> v{ { { 1, 0, 0 }, { 0, 1, 0 }, { 0, 0, 1 } } };
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off < 1e-30) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  int m = 0;
  if (a[1][1] < a[m][m]) m = 1;
  if (a[2][2] < a[m][m]) m = 2;
  return { v[0][m], v[1][m], v[2][m] };
}

} // namespace

PlaneModel
fit_plane_least_squares(const PointCloud& cloud, const std::vector<std::size_t>& indices)
{
  if (indices.size() < 3) {
    throw Error(ErrorCode::DegenerateCloud,
                "least-squares plane needs >= 3 points, got " + std::to_string(indices.size()));
  }
  Point3 mean{ 0, 0, 0 };
  for (const std::size_t i : indices) {
    if (i >= cloud.size()) throw Error(ErrorCode::IndexOutOfRange, "plane fit index out of range");
    mean = mean + cloud.points[i].position;
  }
  mean = (1.0 / static_cast<double>(indices.size())) * mean;
  std::array<std::array<double, 3>, 3> cov{};
  for (const std::size_t i : indices) {
    const Point3 d = cloud.points[i].position - mean;
    const double e[3] = { d.x, d.y, d.z };
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cov[r][c] += e[r] * e[c];
  }
  Point3 nrm = smallest_eigenvector(cov);
  const double len = norm(nrm);
  if (!(len > 1e-12)) throw Error(ErrorCode::DegenerateCloud, "least-squares plane is undefined");
  nrm = (1.0 / len) * nrm;
  PlaneModel model;
  model.normal = nrm;
  model.offset = -dot(nrm, mean);
  canonicalize(model.normal, model.offset);
  return model;
}

void
apply_refit(const PointCloud& cloud, const RansacParams& params, PlaneModel& model)
{
  if (!params.refit) return;
  const PlaneModel fit = fit_plane_least_squares(cloud, model.inliers);
  model.normal = fit.normal;
  model.offset = fit.offset;
  model.inliers.clear();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (std::abs(model.signed_distance(cloud.points[i].position)) <= params.distance_threshold) {
      model.inliers.push_back(i);
    }
  }
}

PlaneSplit
split_plane(const PointCloud& cloud, const PlaneModel& plane)
{
  std::vector<std::uint8_t> is_inlier(cloud.size(), 0);
  for (const auto idx : plane.inliers) {
    if (idx >= cloud.size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "plane inlier " + std::to_string(idx) + " outside cloud of " +
                    std::to_string(cloud.size()));
    }
    is_inlier[idx] = 1;
  }
  PlaneSplit out{ cloud.like(), cloud.like() };
  out.inliers.points.reserve(plane.inliers.size());
  out.outliers.points.reserve(cloud.size() - std::min(cloud.size(), plane.inliers.size()));
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    (is_inlier[i] ? out.inliers : out.outliers).points.push_back(cloud.points[i]);
  }
  return out;
}

} // namespace grp
