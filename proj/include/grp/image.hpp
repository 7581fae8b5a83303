#pragma once

#include "grp/proposal.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace grp {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels; // width * height * 3

  Image() = default;
  Image(int w, int h, Rgb fill = {});

  Rgb at(int u, int v) const noexcept {
    const auto* p = &pixels[3 * (static_cast<std::size_t>(v) * width + u)];
    return { p[0], p[1], p[2] };
  }
  void set(int u, int v, Rgb c) noexcept {
    auto* p = &pixels[3 * (static_cast<std::size_t>(v) * width + u)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Image region cut from a frame; `source` records where it came from.
struct Patch {
  Image image;
  BBox2 source;
};

/// Pixel-exact crop. Throws BoxOutOfBounds unless 0 <= u_min < u_max <= width
/// (same for v).
Patch extract_patch(const Image& image, const BBox2& box);

/// Nearest-neighbor resampling: dst(u, v) = src(floor(u * w / out_w),
/// floor(v * h / out_h)).
Patch scale_patch(const Patch& patch, int out_w, int out_h);

/// Binary PPM (P6, maxval 255).
void write_ppm(const Image& image, const std::filesystem::path& path);
Image read_ppm(const std::filesystem::path& path);

} // namespace grp
