#include "grp/config.hpp"
#include "grp/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace grp;

namespace {

ErrorCode
config_error(const Settings& s)
{
  try {
    pipeline_config(s);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure; // sentinel
}

} // namespace

TEST(Settings, Parse)
{
  const Settings s = parse_settings("# comment\n leaf = 0.01 \n\nclassifier=tcp:h:1\n");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.at("leaf"), "0.01");
  EXPECT_EQ(s.at("classifier"), "tcp:h:1");
  EXPECT_THROW(parse_settings("leaf 0.01\n"), Error);
  EXPECT_THROW(parse_settings("= 3\n"), Error);
  EXPECT_THROW(parse_settings("leaf = 1\nleaf = 2\n"), Error);
}

TEST(Settings, ReadFile)
{
  test::TempDir dir("cfg");
  std::ofstream(dir / "a.cfg") << "seed = 5\n";
  EXPECT_EQ(read_settings(dir / "a.cfg").at("seed"), "5");
  try {
    read_settings(dir / "missing.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFile);
  }
}

TEST(Settings, EnvNames)
{
  EXPECT_EQ(env_name("camera.fi"), "GRP_CAMERA_FI");
  EXPECT_EQ(env_name("ransac.min_fraction"), "GRP_RANSAC_MIN_FRACTION");
  const Settings env = env_settings([](const std::string& name) -> std::optional<std::string> {
    if (name == "GRP_SEED") return " 9 ";
    if (name == "GRP_CLUSTER_TOLERANCE") return "0.03";
    return std::nullopt;
  });
  EXPECT_EQ(env.size(), 2u);
  EXPECT_EQ(env.at("seed"), "9");
  EXPECT_EQ(env.at("cluster.tolerance"), "0.03");
}

TEST(Settings, OverlayLeafAlphaExclusion)
{
  Settings base{ { "alpha", "0.2" }, { "seed", "1" } };
  overlay(base, { { "leaf", "0.01" } });
  EXPECT_FALSE(base.count("alpha"));
  EXPECT_EQ(base.at("leaf"), "0.01");
  EXPECT_EQ(base.at("seed"), "1");
  overlay(base, { { "alpha", "0.3" }, { "seed", "2" } });
  EXPECT_FALSE(base.count("leaf"));
  EXPECT_EQ(base.at("seed"), "2");
  EXPECT_THROW(overlay(base, { { "alpha", "0.3" }, { "leaf", "0.1" } }), Error);
}

TEST(PipelineConfig, Defaults)
{
  const PipelineConfig c = pipeline_config({});
  EXPECT_EQ(c.alpha, 0.1);
  EXPECT_FALSE(c.leaf);
  EXPECT_EQ(c.ransac.distance_threshold, 0.01);
  EXPECT_EQ(c.ransac.max_iterations, 500);
  EXPECT_EQ(c.cluster.tolerance, 0.02);
  EXPECT_EQ(c.cluster.min_size, 50u);
  EXPECT_EQ(c.border_fraction, 0.4);
  EXPECT_EQ(c.classifier, "baseline");
  EXPECT_EQ(c.camera, CameraModel{});
}

TEST(PipelineConfig, ParsesValues)
{
  const PipelineConfig c = pipeline_config({ { "leaf", "0.008" },
                                             { "passthrough.enabled", "false" },
                                             { "passthrough.x_min", "none" },
                                             { "passthrough.z_max", "1.5" },
                                             { "ransac.iterations", "50" },
                                             { "seed", "18446744073709551615" },
                                             { "cluster.max_size", "100" },
                                             { "camera.t0", "0.025" } });
  EXPECT_EQ(c.leaf, 0.008);
  EXPECT_FALSE(c.alpha);
  EXPECT_FALSE(c.passthrough_enabled);
  EXPECT_FALSE(c.passthrough.x.min);
  EXPECT_EQ(c.passthrough.z.max, 1.5);
  EXPECT_EQ(c.ransac.max_iterations, 50);
  EXPECT_EQ(c.ransac.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.cluster.max_size, 100u);
  EXPECT_EQ(c.camera.translation.x, 0.025);
}

TEST(PipelineConfig, Rejects)
{
  EXPECT_EQ(config_error({ { "lef", "0.1" } }), ErrorCode::InvalidConfig);
  EXPECT_EQ(config_error({ { "leaf", "abc" } }), ErrorCode::InvalidConfig);
  EXPECT_EQ(config_error({ { "leaf", "0.1x" } }), ErrorCode::InvalidConfig);
  EXPECT_EQ(config_error({ { "leaf", "0.1" }, { "alpha", "0.2" } }), ErrorCode::InvalidConfig);
  EXPECT_EQ(config_error({ { "cluster.min_size", "-1" } }), ErrorCode::InvalidConfig);
  EXPECT_EQ(config_error({ { "passthrough.enabled", "maybe" } }), ErrorCode::InvalidConfig);
  EXPECT_EQ(config_error({ { "seed", "-3" } }), ErrorCode::InvalidConfig);
  // value errors caught by validation keep their own codes
  EXPECT_NE(config_error({ { "leaf", "-0.1" } }), ErrorCode::IoFailure);
  EXPECT_NE(config_error({ { "alpha", "1.5" } }), ErrorCode::IoFailure);
  EXPECT_NE(config_error({ { "cluster.tolerance", "0" } }), ErrorCode::IoFailure);
  EXPECT_NE(config_error({ { "camera.fi", "0" } }), ErrorCode::IoFailure);
}

TEST(PipelineConfig, SettingsRoundTrip)
{
  PipelineConfig c;
  c.ransac.seed = 77;
  c.ransac.refit = true;
  c.cluster.tolerance = 0.0125;
  c.passthrough.y.max.reset();
  c.camera.rotation = { 0, -1, 0, 1, 0, 0, 0, 0, 1 };
  c.classifier = "tcp:localhost:7000";
  const Settings s = to_settings(c);
  for (const auto& [k, v] : s) {
    (void)v;
    EXPECT_NE(std::find(pipeline_keys().begin(), pipeline_keys().end(), k), pipeline_keys().end()) << k;
  }
  const PipelineConfig back = pipeline_config(s);
  EXPECT_EQ(to_settings(back), s);
  EXPECT_EQ(back.camera, c.camera);
  EXPECT_EQ(parse_settings(format_settings(s)), s);
}

TEST(SceneSettings, RoundTripSuiteScenes)
{
  const auto suite = standard_suite();
  for (std::size_t k : { 0u, 22u, 27u, 33u, 38u }) {
    const SceneSpec& s = suite[k];
    const Settings st = scene_settings(s);
    const SceneSpec back = scene_from_settings(parse_settings(format_settings(st)));
    EXPECT_EQ(scene_settings(back), st);
    EXPECT_EQ(back.name, s.name);
    EXPECT_EQ(back.motion, s.motion);
    EXPECT_EQ(back.seed, s.seed);
    ASSERT_EQ(back.objects.size(), s.objects.size());
    for (std::size_t j = 0; j < s.objects.size(); ++j) {
      EXPECT_EQ(back.objects[j].centroid, s.objects[j].centroid);
      EXPECT_EQ(back.objects[j].color, s.objects[j].color);
      EXPECT_EQ(back.objects[j].label, s.objects[j].label);
      EXPECT_EQ(back.objects[j].shape, s.objects[j].shape);
    }
  }
}

TEST(SceneSettings, Rejects)
{
  Settings st = scene_settings(standard_suite()[0]);
  Settings bad = st;
  bad["tabel.z"] = "1";
  EXPECT_THROW(scene_from_settings(bad), Error);
  bad = st;
  bad["object.0.shape"] = "cone";
  EXPECT_THROW(scene_from_settings(bad), Error);
  bad = st;
  bad["object.0.color"] = "1,2";
  EXPECT_THROW(scene_from_settings(bad), Error);
  bad = st;
  bad["object.0.color"] = "1,2,300";
  EXPECT_THROW(scene_from_settings(bad), Error);
  bad = st;
  bad["motion"] = "spin";
  EXPECT_THROW(scene_from_settings(bad), Error);
}
