#include "grp/cloud.hpp"

#include "grp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace grp {

namespace {

void
check_axis(const AxisBounds& a, const char* name)
{
  if (a.min && a.max && !(*a.min < *a.max)) {
    throw Error(ErrorCode::InvalidBounds,
                std::string("passthrough ") + name + " min must be < max");
  }
  if ((a.min && std::isnan(*a.min)) || (a.max && std::isnan(*a.max))) {
    throw Error(ErrorCode::InvalidBounds,
                std::string("passthrough ") + name + " bound is NaN");
  }
}

AxisBounds
intersect_axis(const AxisBounds& a, const AxisBounds& b)
{
  AxisBounds out;
  if (a.min && b.min) out.min = std::max(*a.min, *b.min);
  else out.min = a.min ? a.min : b.min;
  if (a.max && b.max) out.max = std::min(*a.max, *b.max);
  else out.max = a.max ? a.max : b.max;
  return out;
}

// Cells of every point plus the permutation that groups them by cell in
// canonical (z, y, x) order, stable in input index.
struct Binning {
  std::vector<std::uint32_t> order;
  std::vector<std::size_t> run_starts; // size = cells + 1
};

// Dense counting sort is used while the cell box stays below this many cells.
constexpr std::uint64_t kDenseCellLimit = std::uint64_t{ 1 } << 23;

Binning
bin_points(const PointCloud& cloud, double leaf)
{
  const std::size_t n = cloud.size();
  std::vector<CellIndex> cells(n);

  const auto* pts = cloud.points.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    cells[i] = cell_of(pts[i].position, leaf);
  }

  CellIndex lo{ std::numeric_limits<std::int64_t>::max(),
                std::numeric_limits<std::int64_t>::max(),
                std::numeric_limits<std::int64_t>::max() };
  CellIndex hi{ std::numeric_limits<std::int64_t>::min(),
                std::numeric_limits<std::int64_t>::min(),
                std::numeric_limits<std::int64_t>::min() };
  for (const auto& c : cells) {
    lo.x = std::min(lo.x, c.x);
    lo.y = std::min(lo.y, c.y);
    lo.z = std::min(lo.z, c.z);
    hi.x = std::max(hi.x, c.x);
    hi.y = std::max(hi.y, c.y);
    hi.z = std::max(hi.z, c.z);
  }

  Binning out;
  out.order.resize(n);

  const auto span = [](std::int64_t a, std::int64_t b) {
    return static_cast<unsigned __int128>(b - a) + 1;
  };
  const unsigned __int128 total =
    span(lo.x, hi.x) * span(lo.y, hi.y) * span(lo.z, hi.z);

  if (total <= kDenseCellLimit) {
    const auto nx = static_cast<std::uint64_t>(hi.x - lo.x + 1);
    const auto ny = static_cast<std::uint64_t>(hi.y - lo.y + 1);
    std::vector<std::uint64_t> keys(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto& c = cells[i];
      keys[i] = (static_cast<std::uint64_t>(c.z - lo.z) * ny +
                 static_cast<std::uint64_t>(c.y - lo.y)) * nx +
                static_cast<std::uint64_t>(c.x - lo.x);
    }
    std::vector<std::uint32_t> offset(static_cast<std::size_t>(total) + 1, 0);
    for (auto k : keys) ++offset[k + 1];
    out.run_starts.push_back(0);
    for (std::size_t k = 1; k < offset.size(); ++k) {
      if (offset[k] != 0) out.run_starts.push_back(out.run_starts.back() + offset[k]);
      offset[k] += offset[k - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.order[offset[keys[i]]++] = static_cast<std::uint32_t>(i);
    }
    return out;
  }

  for (std::size_t i = 0; i < n; ++i) out.order[i] = static_cast<std::uint32_t>(i);
  std::sort(out.order.begin(), out.order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (cells[a] != cells[b]) return cells[a] < cells[b];
              return a < b;
            });
  out.run_starts.push_back(0);
  for (std::size_t k = 1; k < n; ++k) {
    if (cells[out.order[k]] != cells[out.order[k - 1]]) out.run_starts.push_back(k);
  }
  out.run_starts.push_back(n);
  return out;
}

double
reduction_ratio(const PointCloud& cloud, double leaf)
{
  return static_cast<double>(count_occupied_cells(cloud, leaf)) /
         static_cast<double>(cloud.size());
}

} // namespace

void
PassthroughBounds::validate() const
{
  check_axis(x, "x");
  check_axis(y, "y");
  check_axis(z, "z");
}

PassthroughBounds
PassthroughBounds::intersect(const PassthroughBounds& a, const PassthroughBounds& b)
{
  return { intersect_axis(a.x, b.x), intersect_axis(a.y, b.y), intersect_axis(a.z, b.z) };
}

PointCloud
passthrough(const PointCloud& cloud, const PassthroughBounds& bounds)
{
  bounds.validate();
  const std::size_t n = cloud.size();
  std::vector<std::uint8_t> keep(n);
  const auto* pts = cloud.points.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    keep[i] = bounds.contains(pts[i].position) ? 1 : 0;
  }
  PointCloud out = cloud.like();
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.points.push_back(pts[i]);
  }
  return out;
}

CellIndex
cell_of(const Point3& p, double leaf) noexcept
{
  return { static_cast<std::int64_t>(std::floor(p.x / leaf)),
           static_cast<std::int64_t>(std::floor(p.y / leaf)),
           static_cast<std::int64_t>(std::floor(p.z / leaf)) };
}

PointCloud
voxel_downsample(const PointCloud& cloud, double leaf)
{
  if (!(leaf > 0.0) || !std::isfinite(leaf)) {
    throw Error(ErrorCode::NonPositiveLeaf, "voxel leaf must be > 0");
  }
  PointCloud out = cloud.like();
  if (cloud.empty()) return out;

  const Binning bins = bin_points(cloud, leaf);
  const std::size_t cells = bins.run_starts.size() - 1;
  out.points.resize(cells);

  const auto* pts = cloud.points.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells); ++c) {
    const std::size_t begin = bins.run_starts[c];
    const std::size_t end = bins.run_starts[c + 1];
    double sx = 0.0, sy = 0.0, sz = 0.0;
    std::uint64_t sr = 0, sg = 0, sb = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto& p = pts[bins.order[k]];
      sx += p.position.x;
      sy += p.position.y;
      sz += p.position.z;
      sr += p.r;
      sg += p.g;
      sb += p.b;
    }
    const std::uint64_t count = end - begin;
    const double inv = static_cast<double>(count);
    auto& o = out.points[c];
    o.position = { sx / inv, sy / inv, sz / inv };
    // round half-up: floor(sum / count + 1/2)
    o.r = static_cast<std::uint8_t>((2 * sr + count) / (2 * count));
    o.g = static_cast<std::uint8_t>((2 * sg + count) / (2 * count));
    o.b = static_cast<std::uint8_t>((2 * sb + count) / (2 * count));
  }
  return out;
}

std::size_t
count_occupied_cells(const PointCloud& cloud, double leaf)
{
  if (!(leaf > 0.0) || !std::isfinite(leaf)) {
    throw Error(ErrorCode::NonPositiveLeaf, "voxel leaf must be > 0");
  }
  if (cloud.empty()) return 0;
  return bin_points(cloud, leaf).run_starts.size() - 1;
}

LeafCalibration
calibrate_leaf(const PointCloud& cloud, double alpha)
{
  if (cloud.empty()) {
    throw Error(ErrorCode::EmptyCloud, "cannot calibrate a leaf on an empty cloud");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1]");
  }
  const double lower = 0.8 * alpha;
  const double upper = 1.2 * alpha;
  const auto within = [&](double r) { return r >= lower && r <= upper; };

  LeafCalibration result;
  double lo = kMinLeaf;
  double hi = kMaxLeaf;
  const double r_lo = reduction_ratio(cloud, lo);
  if (within(r_lo)) return { lo, r_lo, 0, true };
  if (r_lo < lower) return { lo, r_lo, 0, false };
  const double r_hi = reduction_ratio(cloud, hi);
  if (within(r_hi)) return { hi, r_hi, 0, true };
  if (r_hi > upper) return { hi, r_hi, 0, false };

  double best_leaf = lo;
  double best_ratio = r_lo;
  if (std::abs(r_hi - alpha) < std::abs(r_lo - alpha)) {
    best_leaf = hi;
    best_ratio = r_hi;
  }
  for (int step = 1; step <= kMaxCalibrationSteps; ++step) {
    const double mid = std::sqrt(lo * hi);
    const double r = reduction_ratio(cloud, mid);
    if (within(r)) return { mid, r, step, true };
    // coarser leaves merge more points, so the ratio falls as leaf grows
    if (r > alpha) lo = mid;
    else hi = mid;
    if (std::abs(r - alpha) < std::abs(best_ratio - alpha)) {
      best_leaf = mid;
      best_ratio = r;
    }
    result.iterations = step;
  }
  result.leaf = best_leaf;
  result.ratio = best_ratio;
  result.converged = false;
  return result;
}

} // namespace grp
