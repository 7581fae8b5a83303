#include "grp/error.hpp"
#include "grp/spatial_index.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

using namespace grp;

namespace {

std::vector<Point3>
positions(const PointCloud& c)
{
  std::vector<Point3> out;
  for (const auto& p : c.points) out.push_back(p.position);
  return out;
}

std::vector<std::size_t>
scan(const std::vector<Point3>& pts, const Point3& q, double r)
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = pts[i].x - q.x, dy = pts[i].y - q.y, dz = pts[i].z - q.z;
    if (dx * dx + dy * dy + dz * dz <= r * r) out.push_back(i);
  }
  return out;
}

} // namespace

TEST(SpatialIndex, EmptyAnswersNothing)
{
  const SpatialIndex idx = SpatialIndex::build(PointCloud{});
  EXPECT_TRUE(idx.radius_neighbors({ 0, 0, 0 }, 10.0).empty());
}

TEST(SpatialIndex, ClosedBallBoundary)
{
  const std::vector<Point3> one{ { 0.25, 0.5, 1.0 } };
  const SpatialIndex a{ std::span<const Point3>(one) };
  EXPECT_EQ(a.radius_neighbors({ 0.25, 0.5, 1.0 }, 0.0), std::vector<std::size_t>{ 0 });
  EXPECT_TRUE(a.radius_neighbors({ 0.25, 0.5, 1.5 }, 0.0).empty());

  const std::vector<Point3> two{ { 0, 0, 0 }, { 0.5, 0, 0 } };
  const SpatialIndex b{ std::span<const Point3>(two) };
  EXPECT_EQ(b.radius_neighbors({ 0, 0, 0 }, 0.5), (std::vector<std::size_t>{ 0, 1 }));
}

TEST(SpatialIndex, NegativeRadiusRejected)
{
  const std::vector<Point3> one{ { 0, 0, 0 } };
  const SpatialIndex a{ std::span<const Point3>(one) };
  EXPECT_THROW(a.radius_neighbors({ 0, 0, 0 }, -0.1), Error);
  EXPECT_THROW(a.radius_neighbors({ 0, 0, 0 }, std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST(SpatialIndex, MatchesLinearScan)
{
  SplitMix64 rng(12);
  const auto pts = positions(test::random_cloud(rng, 10000));
  const SpatialIndex idx{ std::span<const Point3>(pts) };
  EXPECT_EQ(idx.size(), pts.size());
  for (int q = 0; q < 100; ++q) {
    const Point3 seed{ rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2) };
    const double r = rng.uniform(0.0, 0.3);
    EXPECT_EQ(idx.radius_neighbors(seed, r), scan(pts, seed, r));
  }
}

TEST(SpatialIndex, DuplicatesAndQueriesAtPoints)
{
  SplitMix64 rng(13);
  std::vector<Point3> pts;
  for (int i = 0; i < 500; ++i) {
    const Point3 p{ static_cast<double>(rng.index(5)) * 0.1, static_cast<double>(rng.index(5)) * 0.1, 0.0 };
    pts.push_back(p);
  }
  const SpatialIndex idx{ std::span<const Point3>(pts) };
  for (int q = 0; q < 50; ++q) {
    const Point3& seed = pts[rng.index(pts.size())];
    EXPECT_EQ(idx.radius_neighbors(seed, 0.1), scan(pts, seed, 0.1));
  }
}

TEST(SpatialIndex, AppendingOverloadReturnsSameSet)
{
  SplitMix64 rng(14);
  const auto pts = positions(test::random_cloud(rng, 3000));
  const SpatialIndex idx{ std::span<const Point3>(pts) };
  std::vector<std::uint32_t> out{ 7u };
  const std::size_t n = idx.radius_neighbors({ 0, 0, 0 }, 0.4, out);
  ASSERT_EQ(out.size(), n + 1);
  std::vector<std::size_t> got(out.begin() + 1, out.end());
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, scan(pts, { 0, 0, 0 }, 0.4));
}
