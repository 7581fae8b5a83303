#include "grp/error.hpp"
#include "grp/image.hpp"
#include "grp/rng.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace grp;

TEST(Image, FillAndAccess)
{
  Image img(4, 3, { 1, 2, 3 });
  EXPECT_EQ(img.pixels.size(), 36u);
  EXPECT_EQ(img.at(3, 2), (Rgb{ 1, 2, 3 }));
  img.set(2, 1, { 9, 8, 7 });
  EXPECT_EQ(img.at(2, 1), (Rgb{ 9, 8, 7 }));
  EXPECT_EQ(img.pixels[3 * (1 * 4 + 2)], 9);
}

TEST(ExtractPatch, MatchesPixelLoopOracle)
{
  SplitMix64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(50)), h = 1 + static_cast<int>(rng.index(50));
    const Image img = test::random_image(rng, w, h);
    const int u0 = static_cast<int>(rng.index(w)), v0 = static_cast<int>(rng.index(h));
    const BBox2 box{ u0, v0, u0 + 1 + static_cast<int>(rng.index(w - u0)),
                     v0 + 1 + static_cast<int>(rng.index(h - v0)) };
    const Patch p = extract_patch(img, box);
    ASSERT_EQ(p.image.width, box.width());
    ASSERT_EQ(p.image.height, box.height());
    EXPECT_EQ(p.source, box);
    for (int v = 0; v < box.height(); ++v)
      for (int u = 0; u < box.width(); ++u)
        ASSERT_EQ(p.image.at(u, v), img.at(u + box.u_min, v + box.v_min));
  }
}

TEST(ExtractPatch, RejectsOutOfBounds)
{
  const Image img(10, 10);
  for (const BBox2& b : { BBox2{ -1, 0, 5, 5 }, BBox2{ 0, 0, 11, 5 }, BBox2{ 0, 0, 5, 11 },
                          BBox2{ 3, 3, 3, 5 }, BBox2{ 5, 5, 4, 6 } }) {
    try {
      extract_patch(img, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BoxOutOfBounds);
    }
  }
  EXPECT_NO_THROW(extract_patch(img, { 0, 0, 10, 10 }));
}

TEST(ScalePatch, NearestNeighborOracle)
{
  SplitMix64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = 1 + static_cast<int>(rng.index(40)), h = 1 + static_cast<int>(rng.index(40));
    const Patch src{ test::random_image(rng, w, h), { 0, 0, w, h } };
    const int ow = 1 + static_cast<int>(rng.index(70)), oh = 1 + static_cast<int>(rng.index(70));
    const Patch out = scale_patch(src, ow, oh);
    ASSERT_EQ(out.image.width, ow);
    ASSERT_EQ(out.image.height, oh);
    for (int v = 0; v < oh; ++v)
      for (int u = 0; u < ow; ++u)
        ASSERT_EQ(out.image.at(u, v), src.image.at(u * w / ow, v * h / oh));
  }
}

TEST(ScalePatch, IdentityAndErrors)
{
  SplitMix64 rng(43);
  const Patch src{ test::random_image(rng, 7, 5), { 1, 2, 8, 7 } };
  const Patch same = scale_patch(src, 7, 5);
  EXPECT_EQ(same.image, src.image);
  EXPECT_EQ(same.source, src.source);
  EXPECT_THROW(scale_patch(src, 0, 5), Error);
  EXPECT_THROW(scale_patch(src, 5, -1), Error);
}

TEST(Ppm, RoundTrip)
{
  test::TempDir dir("ppm");
  SplitMix64 rng(44);
  const Image img = test::random_image(rng, 33, 17);
  write_ppm(img, dir / "a.ppm");
  EXPECT_EQ(read_ppm(dir / "a.ppm"), img);
}

TEST(Ppm, ReadsCommentsInHeader)
{
  test::TempDir dir("ppm");
  {
    std::ofstream out(dir / "c.ppm", std::ios::binary);
    out << "P6\n# a comment\n2 1\n255\n";
    out.write("\x01\x02\x03\x04\x05\x06", 6);
  }
  const Image img = read_ppm(dir / "c.ppm");
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.at(1, 0), (Rgb{ 4, 5, 6 }));
}

TEST(Ppm, Errors)
{
  test::TempDir dir("ppm");
  try {
    read_ppm(dir / "missing.ppm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFile);
  }
  const auto write = [&](const std::string& name, const std::string& data) {
    std::ofstream out(dir / name, std::ios::binary);
    out << data;
  };
  write("p3.ppm", "P3\n1 1\n255\n1 2 3\n");
  write("trunc.ppm", "P6\n4 4\n255\nabc");
  write("deep.ppm", "P6\n1 1\n65535\nabcdef");
  write("zero.ppm", "P6\n0 1\n255\n");
  for (const char* name : { "p3.ppm", "trunc.ppm", "deep.ppm", "zero.ppm" }) {
    try {
      read_ppm(dir / name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedImage) << name;
    }
  }
}
