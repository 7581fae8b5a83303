#include "grp/clustering.hpp"
#include "grp/error.hpp"
#include "grp/reference.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace grp;

namespace {

// Union-find over the O(n^2) tolerance graph.
std::vector<Cluster>
brute_force_clusters(const PointCloud& c, const ClusterParams& p)
{
  const std::size_t n = c.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (squared_distance(c.points[i].position, c.points[j].position) <= p.tolerance * p.tolerance) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<Cluster> out;
  for (auto& g : groups) {
    if (!g.empty() && g.size() >= p.min_size && g.size() <= p.max_size) out.push_back({ g });
  }
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.indices.front() < b.indices.front();
  });
  return out;
}

PointCloud
blob(SplitMix64& rng, const Point3& center, std::size_t n, double radius)
{
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.points.push_back({ center + Point3{ rng.uniform(-radius, radius), rng.uniform(-radius, radius),
                                          rng.uniform(-radius, radius) },
                         0, 0, 0 });
  }
  return c;
}

} // namespace

TEST(Cluster, SinglePoint)
{
  PointCloud c;
  c.points.push_back({ { 0, 0, 1 }, 0, 0, 0 });
  const auto out = euclidean_cluster(c, { 0.02, 1, 10 });
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].indices, std::vector<std::size_t>{ 0 });
}

TEST(Cluster, EmptyInput)
{
  EXPECT_TRUE(euclidean_cluster(PointCloud{}, ClusterParams{}).empty());
}

TEST(Cluster, TwoBlobsExactMembership)
{
  SplitMix64 rng(1);
  // 200 points in a 6 cm cube: spacing well under the tolerance
  PointCloud c = blob(rng, { 0, 0, 1 }, 200, 0.03);
  const PointCloud b = blob(rng, { 0.5, 0, 1 }, 200, 0.03);
  c.points.insert(c.points.end(), b.points.begin(), b.points.end());
  const ClusterParams p{ 0.03, 10, 1000 };
  const auto out = euclidean_cluster(c, p);
  EXPECT_EQ(out, brute_force_clusters(c, p));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].size() + out[1].size(), 400u);
  for (auto i : out[0].indices) EXPECT_LT(i, 200u);
}

TEST(Cluster, SizeGate)
{
  SplitMix64 rng(2);
  const PointCloud c = blob(rng, { 0, 0, 1 }, 5, 0.001);
  EXPECT_TRUE(euclidean_cluster(c, { 0.02, 10, 100 }).empty());
  EXPECT_TRUE(euclidean_cluster(c, { 0.02, 1, 4 }).empty());
  EXPECT_EQ(euclidean_cluster(c, { 0.02, 5, 5 }).size(), 1u);
}

TEST(Cluster, MatchesBruteForceOnRandomClouds)
{
  SplitMix64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 50 + rng.index(1500);
    const PointCloud c = test::random_cloud(rng, n, 0.0, 1.0);
    ClusterParams p;
    p.tolerance = rng.uniform(0.02, 0.12);
    p.min_size = 1 + rng.index(5);
    p.max_size = p.min_size + rng.index(400);
    const auto expect = brute_force_clusters(c, p);
    EXPECT_EQ(euclidean_cluster(c, p), expect) << "trial " << trial;
    EXPECT_EQ(reference::euclidean_cluster(c, p), expect) << "trial " << trial;
  }
}

TEST(Cluster, PartitionProperty)
{
  SplitMix64 rng(4);
  const PointCloud c = test::random_cloud(rng, 3000, 0.0, 1.0);
  const auto out = euclidean_cluster(c, { 0.05, 1, 100000 });
  std::vector<int> seen(c.size(), 0);
  for (const auto& cl : out) {
    EXPECT_TRUE(std::is_sorted(cl.indices.begin(), cl.indices.end()));
    for (auto i : cl.indices) ++seen[i];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Cluster, TranslationInvariant)
{
  SplitMix64 rng(5);
  const PointCloud c = test::random_cloud(rng, 2000, 0.0, 1.0);
  PointCloud moved = c;
  for (auto& p : moved.points) p.position = p.position + Point3{ 4.0, -8.0, 2.0 };
  const ClusterParams p{ 0.06, 2, 5000 };
  EXPECT_EQ(euclidean_cluster(c, p), euclidean_cluster(moved, p));
}

TEST(Cluster, PermutationInvariantUpToRelabeling)
{
  SplitMix64 rng(6);
  const PointCloud c = test::random_cloud(rng, 1500, 0.0, 1.0);
  std::vector<std::size_t> perm(c.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
  PointCloud shuffled;
  for (auto k : perm) shuffled.points.push_back(c.points[k]);
  const ClusterParams p{ 0.07, 3, 5000 };
  auto a = euclidean_cluster(c, p);
  auto b = euclidean_cluster(shuffled, p);
  for (auto& cl : b) {
    for (auto& i : cl.indices) i = perm[i];
    std::sort(cl.indices.begin(), cl.indices.end());
  }
  sort_clusters(b);
  EXPECT_EQ(a, b);
}

TEST(Cluster, InvalidParams)
{
  EXPECT_THROW((ClusterParams{ 0.0, 1, 10 }).validate(), Error);
  EXPECT_THROW((ClusterParams{ 0.02, 0, 10 }).validate(), Error);
  EXPECT_THROW((ClusterParams{ 0.02, 20, 10 }).validate(), Error);
}
