#pragma once

#include "grp/cloud.hpp"
#include "grp/image.hpp"
#include "grp/rng.hpp"

#include <filesystem>
#include <string>

#include <unistd.h>

namespace grp::test {

inline PointCloud
random_cloud(SplitMix64& rng, std::size_t n, double lo = -1.0, double hi = 1.0)
{
  PointCloud c;
  c.points.resize(n);
  for (auto& p : c.points) {
    p.position = { rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi) };
    p.r = static_cast<std::uint8_t>(rng.index(256));
    p.g = static_cast<std::uint8_t>(rng.index(256));
    p.b = static_cast<std::uint8_t>(rng.index(256));
  }
  return c;
}

inline Image
random_image(SplitMix64& rng, int w, int h)
{
  Image img(w, h);
  for (auto& v : img.pixels) v = static_cast<std::uint8_t>(rng.index(256));
  return img;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag)
  {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("grp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

} // namespace grp::test
