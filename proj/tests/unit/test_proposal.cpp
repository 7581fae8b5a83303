#include "grp/error.hpp"
#include "grp/proposal.hpp"
#include "grp/synth.hpp"
#include "support.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>

using namespace grp;

namespace {

// 3x4 homogeneous projection K [R | t].
Eigen::Vector2d
matrix_project(const CameraModel& c, const Point3& p)
{
  Eigen::Matrix3d k;
  k << c.fi, 0, c.ci, 0, c.fj, c.cj, 0, 0, 1;
  Eigen::Matrix<double, 3, 4> rt;
  for (int r = 0; r < 3; ++r) {
    for (int q = 0; q < 3; ++q) rt(r, q) = c.rotation[3 * r + q];
  }
  rt.col(3) << c.translation.x, c.translation.y, c.translation.z;
  const Eigen::Vector3d h = k * rt * Eigen::Vector4d(p.x, p.y, p.z, 1.0);
  return { h.x() / h.z(), h.y() / h.z() };
}

CameraModel
random_camera(SplitMix64& rng)
{
  CameraModel c;
  c.fi = rng.uniform(300, 900);
  c.fj = rng.uniform(300, 900);
  c.width = 320 + static_cast<int>(rng.index(960));
  c.height = 240 + static_cast<int>(rng.index(720));
  c.ci = rng.uniform(1.0, c.width - 1.0);
  c.cj = rng.uniform(1.0, c.height - 1.0);
  const Eigen::Quaterniond q = Eigen::Quaterniond(rng.uniform(0.9, 1.0), rng.uniform(-0.1, 0.1),
                                                  rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1))
                                 .normalized();
  const Eigen::Matrix3d r = q.toRotationMatrix();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) c.rotation[3 * a + b] = r(a, b);
  c.translation = { rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05) };
  return c;
}

PointCloud
cloud_of(std::initializer_list<Point3> pts)
{
  PointCloud c;
  for (const auto& p : pts) c.points.push_back({ p, 0, 0, 0 });
  return c;
}

Cluster
all_of(const PointCloud& c)
{
  Cluster cl;
  for (std::size_t i = 0; i < c.size(); ++i) cl.indices.push_back(i);
  return cl;
}

} // namespace

TEST(Camera, ProjectExamples)
{
  const CameraModel cam;
  const PixelCoord a = project_point(cam, { 0, 0, 1 });
  EXPECT_EQ(a.i, 319.5);
  EXPECT_EQ(a.j, 239.5);
  const PixelCoord b = project_point(cam, { 0.1, -0.05, 1.0 });
  EXPECT_NEAR(b.i, 372.0, 1e-12);
  EXPECT_NEAR(b.j, 213.25, 1e-12);
  try {
    project_point(cam, { 0, 0, -1 });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BehindCamera);
  }
  EXPECT_THROW(project_point(cam, { 0, 0, 1e-6 }), Error);
}

TEST(Camera, MatchesHomogeneousMatrixOracle)
{
  SplitMix64 rng(31);
  for (int k = 0; k < 10000; ++k) {
    const CameraModel cam = random_camera(rng);
    ASSERT_NO_THROW(cam.validate());
    const Point3 p{ rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.4, 4.9) };
    if (cam.to_rgb_frame(p).z < 0.3) continue;
    const PixelCoord got = project_point(cam, p);
    const Eigen::Vector2d want = matrix_project(cam, p);
    EXPECT_NEAR(got.i, want.x(), 1e-9 * std::max(1.0, std::abs(want.x())));
    EXPECT_NEAR(got.j, want.y(), 1e-9 * std::max(1.0, std::abs(want.y())));
  }
}

TEST(Camera, ValidateRejectsBadModels)
{
  CameraModel c;
  c.fi = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.ci = 640;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.rotation[0] = 1.01;
  EXPECT_THROW(c.validate(), Error);
}

TEST(BBox3, ExtentsAndCorners)
{
  const PointCloud c = cloud_of({ { 0, 0, 1 }, { 0.1, 0.2, 1.2 } });
  const BBox3 b = bbox3_of(c, all_of(c));
  EXPECT_EQ(b.min, (Point3{ 0, 0, 1 }));
  EXPECT_EQ(b.max, (Point3{ 0.1, 0.2, 1.2 }));
  EXPECT_EQ(b.upper, (Point3{ 0, 0.2, 1.2 }));
  EXPECT_EQ(b.lower, (Point3{ 0.1, 0, 1.2 }));
  const PointCloud one = cloud_of({ { 0.3, 0.4, 0.5 } });
  const BBox3 d = bbox3_of(one, all_of(one));
  EXPECT_EQ(d.min, d.max);
  EXPECT_THROW(bbox3_of(c, Cluster{}), Error);
}

TEST(BBox3, MatchesScanOracle)
{
  SplitMix64 rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const PointCloud c = test::random_cloud(rng, 1 + rng.index(1000));
    Cluster cl;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (rng.index(3) != 0 || i == 0) cl.indices.push_back(i);
    Point3 lo{ 1e300, 1e300, 1e300 }, hi{ -1e300, -1e300, -1e300 };
    for (auto i : cl.indices) {
      const auto& p = c.points[i].position;
      lo = { std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z) };
      hi = { std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z) };
    }
    const BBox3 b = bbox3_of(c, cl);
    EXPECT_EQ(b.min, lo);
    EXPECT_EQ(b.max, hi);
  }
}

TEST(Centroid, ExamplesAndKahanOracle)
{
  const PointCloud two = cloud_of({ { 0, 0, 0 }, { 2, 2, 2 } });
  EXPECT_EQ(centroid_of(two, all_of(two)), (Point3{ 1, 1, 1 }));
  EXPECT_THROW(centroid_of(two, Cluster{}), Error);

  SplitMix64 rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const PointCloud c = test::random_cloud(rng, 1 + rng.index(2000), -2.0, 2.0);
    double s[3] = { 0, 0, 0 }, comp[3] = { 0, 0, 0 };
    for (const auto& p : c.points) {
      const double v[3] = { p.position.x, p.position.y, p.position.z };
      for (int a = 0; a < 3; ++a) {
        const double y = v[a] - comp[a];
        const double t = s[a] + y;
        comp[a] = (t - s[a]) - y;
        s[a] = t;
      }
    }
    const double n = static_cast<double>(c.size());
    const Point3 got = centroid_of(c, all_of(c));
    EXPECT_NEAR(got.x, s[0] / n, 1e-9);
    EXPECT_NEAR(got.y, s[1] / n, 1e-9);
    EXPECT_NEAR(got.z, s[2] / n, 1e-9);
  }
}

TEST(ProjectBBox, DegenerateBoxIsOnePixel)
{
  const CameraModel cam;
  const BBox2 b = project_bbox(cam, BBox3::from_extents({ 0, 0, 1 }, { 0, 0, 1 }));
  EXPECT_EQ(b, (BBox2{ 319, 239, 320, 240 }));
}

TEST(ProjectBBox, EightCornerOracle)
{
  SplitMix64 rng(34);
  for (int trial = 0; trial < 1000; ++trial) {
    const CameraModel cam = trial == 0 ? CameraModel{} : random_camera(rng);
    Point3 lo{ rng.uniform(-0.3, 0.2), rng.uniform(-0.3, 0.2), rng.uniform(0.6, 1.5) };
    Point3 hi = lo + Point3{ rng.uniform(0.01, 0.2), rng.uniform(0.01, 0.2), rng.uniform(0.01, 0.2) };
    if (trial == 0) {
      lo = { -0.1, -0.1, 0.9 };
      hi = { 0.1, 0.1, 1.1 };
    }
    double u0 = 1e300, v0 = 1e300, u1 = -1e300, v1 = -1e300;
    for (int k = 0; k < 8; ++k) {
      const Eigen::Vector2d q =
        matrix_project(cam, { k & 1 ? hi.x : lo.x, k & 2 ? hi.y : lo.y, k & 4 ? hi.z : lo.z });
      u0 = std::min(u0, q.x());
      u1 = std::max(u1, q.x());
      v0 = std::min(v0, q.y());
      v1 = std::max(v1, q.y());
    }
    const auto clampd = [](double v, double hi_) { return std::min(std::max(v, 0.0), hi_); };
    const BBox2 want{ static_cast<int>(std::floor(clampd(u0, cam.width))),
                      static_cast<int>(std::floor(clampd(v0, cam.height))),
                      static_cast<int>(std::ceil(clampd(u1, cam.width))),
                      static_cast<int>(std::ceil(clampd(v1, cam.height))) };
    if (want.width() * want.height() < 1) continue;
    EXPECT_EQ(project_bbox(cam, BBox3::from_extents(lo, hi)), want) << "trial " << trial;
  }
}

TEST(ProjectBBox, Errors)
{
  const CameraModel cam;
  try {
    project_bbox(cam, BBox3::from_extents({ -0.1, -0.1, -1.0 }, { 0.1, 0.1, -1.0 }));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FullyBehindCamera);
  }
  try {
    // entirely left of the image
    project_bbox(cam, BBox3::from_extents({ -5.0, 0, 1 }, { -4.0, 0.1, 1 }));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateProjection);
  }
}

TEST(ProjectBBox, ContainsEveryProjectedMember)
{
  SplitMix64 rng(35);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CameraModel cam = random_camera(rng);
    PointCloud c = test::random_cloud(rng, 200, -0.1, 0.1);
    for (auto& p : c.points) p.position.z += 1.0;
    BBox2 b;
    try {
      b = project_bbox(cam, bbox3_of(c, all_of(c)));
    } catch (const Error&) {
      continue; // rotated fully out of the image
    }
    ++checked;
    for (const auto& p : c.points) {
      PixelCoord px;
      if (!try_project(cam, p.position, px)) continue;
      if (px.i < 0 || px.i > cam.width || px.j < 0 || px.j > cam.height) continue;
      EXPECT_GE(px.i, b.u_min);
      EXPECT_LE(px.i, b.u_max);
      EXPECT_GE(px.j, b.v_min);
      EXPECT_LE(px.j, b.v_max);
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(ProjectBBox, TranslationCompensatedByExtrinsics)
{
  SplitMix64 rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    CameraModel cam;
    const Point3 shift{ rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2) };
    const Point3 lo{ rng.uniform(-0.2, 0.1), rng.uniform(-0.2, 0.1), rng.uniform(0.8, 1.2) };
    const Point3 hi = lo + Point3{ 0.1, 0.08, 0.05 };
    const BBox2 a = project_bbox(cam, BBox3::from_extents(lo, hi));
    CameraModel moved = cam;
    moved.translation = -shift;
    const BBox2 b = project_bbox(moved, BBox3::from_extents(lo + shift, hi + shift));
    EXPECT_LE(std::abs(a.u_min - b.u_min), 1);
    EXPECT_LE(std::abs(a.v_min - b.v_min), 1);
    EXPECT_LE(std::abs(a.u_max - b.u_max), 1);
    EXPECT_LE(std::abs(a.v_max - b.v_max), 1);
  }
}

TEST(ExpandBBox, Examples)
{
  const CameraModel cam;
  const BBox2 b{ 100, 100, 200, 200 };
  EXPECT_EQ(expand_bbox(b, 0.0, cam), b);
  EXPECT_EQ(expand_bbox(b, 0.4, cam), (BBox2{ 80, 80, 220, 220 }));
  EXPECT_EQ(expand_bbox({ 0, 0, 100, 100 }, 0.4, cam), (BBox2{ 0, 0, 120, 120 }));
  EXPECT_EQ(expand_bbox({ 600, 400, 640, 480 }, 1.0, cam), (BBox2{ 580, 360, 640, 480 }));
  EXPECT_THROW(expand_bbox(b, -0.1, cam), Error);
}

TEST(ExpandBBox, MatchesFormulaOracle)
{
  SplitMix64 rng(37);
  const CameraModel cam;
  for (int trial = 0; trial < 1000; ++trial) {
    const int u0 = static_cast<int>(rng.index(600)), v0 = static_cast<int>(rng.index(440));
    const BBox2 b{ u0, v0, u0 + 1 + static_cast<int>(rng.index(640 - u0)),
                   v0 + 1 + static_cast<int>(rng.index(480 - v0)) };
    const double f = rng.uniform(0.0, 1.5);
    const double cu = (b.u_min + b.u_max) / 2.0, cv = (b.v_min + b.v_max) / 2.0;
    const double hw = (1 + f) * b.width() / 2.0, hh = (1 + f) * b.height() / 2.0;
    const BBox2 want{ static_cast<int>(std::floor(std::max(0.0, cu - hw))),
                      static_cast<int>(std::floor(std::max(0.0, cv - hh))),
                      static_cast<int>(std::ceil(std::min(640.0, cu + hw))),
                      static_cast<int>(std::ceil(std::min(480.0, cv + hh))) };
    EXPECT_EQ(expand_bbox(b, f, cam), want);
  }
}

TEST(Config, LeafAndAlphaExclusive)
{
  PipelineConfig c;
  EXPECT_NO_THROW(c.validate());
  c.leaf = 0.01;
  EXPECT_THROW(c.validate(), Error);
  c.alpha.reset();
  EXPECT_NO_THROW(c.validate());
  c.leaf = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

namespace {

SceneSpec
three_boxes()
{
  SceneSpec s;
  s.name = "three";
  s.spacing = 0.003;
  const auto& cat = class_catalog();
  s.objects = { cat[0].at({ -0.2, 0.0, 1.1 - 0.02 - 0.04 }), cat[1].at({ 0.05, 0.1, 1.1 - 0.02 - 0.04 }),
                cat[2].at({ 0.25, -0.15, 1.1 - 0.02 - 0.025 }) };
  return s;
}

} // namespace

TEST(Propose, ThreeBoxesGiveThreeProposalsNearTruth)
{
  const SceneSpec s = three_boxes();
  const PointCloud cloud = synth_cloud(s, 0);
  const GroundTruth truth = ground_truth(s, 0);
  PipelineConfig cfg;
  cfg.alpha.reset();
  cfg.leaf = 0.01;
  const ProposalSet ps = propose_regions(cloud, cfg);
  ASSERT_EQ(ps.proposals.size(), 3u);
  EXPECT_EQ(ps.dropped_projection, 0u);
  for (const auto& t : truth.objects) {
    double best = 1e9;
    for (const auto& p : ps.proposals) best = std::min(best, distance(p.centroid, t.centroid));
    EXPECT_LT(best, 0.5 * 0.01 * std::sqrt(3.0)) << t.label;
  }
  for (const auto& p : ps.proposals) {
    EXPECT_TRUE(p.bbox3.contains(p.centroid));
    EXPECT_GT(p.bbox2.width(), 0);
  }
}

TEST(Propose, PlaneOnlyGivesNothing)
{
  const PointCloud cloud = synth_cloud(empty_scene(), 0);
  const ProposalSet ps = propose_regions(cloud, PipelineConfig{});
  EXPECT_TRUE(ps.proposals.empty());
}

TEST(Propose, BitIdenticalAcrossRuns)
{
  const PointCloud cloud = synth_cloud(three_boxes(), 3);
  const PipelineConfig cfg;
  const ProposalSet a = propose_regions(cloud, cfg);
  const ProposalSet b = propose_regions(cloud, cfg);
  ASSERT_EQ(a.proposals.size(), b.proposals.size());
  for (std::size_t k = 0; k < a.proposals.size(); ++k) {
    EXPECT_EQ(a.proposals[k].centroid, b.proposals[k].centroid);
    EXPECT_EQ(a.proposals[k].bbox2, b.proposals[k].bbox2);
    EXPECT_EQ(a.proposals[k].cluster_size, b.proposals[k].cluster_size);
  }
  EXPECT_EQ(a.leaf, b.leaf);
}

TEST(Propose, EmptyCloudRejected)
{
  EXPECT_THROW(propose_regions(PointCloud{}, PipelineConfig{}), Error);
}

TEST(Propose, UnprojectableClustersAreDroppedAndCounted)
{
  const SceneSpec s = three_boxes();
  const PointCloud cloud = synth_cloud(s, 0);
  PipelineConfig cfg;
  cfg.alpha.reset();
  cfg.leaf = 0.01;
  // push the RGB camera so far sideways that nothing lands in the image
  cfg.camera.translation = { 50.0, 0.0, 0.0 };
  const ProposalSet ps = propose_regions(cloud, cfg);
  EXPECT_TRUE(ps.proposals.empty());
  EXPECT_EQ(ps.dropped_projection, 3u);
}
