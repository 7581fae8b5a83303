#include "grp/image.hpp"

#include "grp/error.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace grp {

Image::Image(int w, int h, Rgb fill)
  : width(w)
  , height(h)
  , pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3)
{
  for (std::size_t k = 0; k < pixels.size(); k += 3) {
    pixels[k] = fill.r;
    pixels[k + 1] = fill.g;
    pixels[k + 2] = fill.b;
  }
}

Patch
extract_patch(const Image& image, const BBox2& box)
{
  if (box.u_min < 0 || box.v_min < 0 || box.u_max > image.width ||
      box.v_max > image.height || box.u_min >= box.u_max || box.v_min >= box.v_max) {
    throw Error(ErrorCode::BoxOutOfBounds, "patch box lies outside the image");
  }
  Patch out{ Image(box.width(), box.height()), box };
  const std::size_t row_bytes = 3 * static_cast<std::size_t>(box.width());
  for (int v = 0; v < box.height(); ++v) {
    const auto* src = &image.pixels[3 * (static_cast<std::size_t>(v + box.v_min) * image.width +
                                         box.u_min)];
    std::copy(src, src + row_bytes, &out.image.pixels[row_bytes * v]);
  }
  return out;
}

Patch
scale_patch(const Patch& patch, int out_w, int out_h)
{
  if (out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::ShapeMismatch, "scaled patch size must be >= 1");
  }
  const Image& src = patch.image;
  Patch out{ Image(out_w, out_h), patch.source };
  for (int v = 0; v < out_h; ++v) {
    const int sv = static_cast<int>(static_cast<long long>(v) * src.height / out_h);
    for (int u = 0; u < out_w; ++u) {
      const int su = static_cast<int>(static_cast<long long>(u) * src.width / out_w);
      out.image.set(u, v, src.at(su, sv));
    }
  }
  return out;
}

void
write_ppm(const Image& image, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

namespace {

// Next header integer, skipping whitespace and '#' comments.
int
read_header_int(std::istream& in, const std::filesystem::path& path)
{
  int c = in.peek();
  while (c != EOF) {
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else {
      break;
    }
    c = in.peek();
  }
  long long v = -1;
  if (!(in >> v) || v < 0 || v > (1 << 20)) {
    throw Error(ErrorCode::MalformedImage, path.string() + ": bad PPM header");
  }
  return static_cast<int>(v);
}

} // namespace

Image
read_ppm(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P6") {
    throw Error(ErrorCode::MalformedImage, path.string() + ": not a binary PPM (P6)");
  }
  const int w = read_header_int(in, path);
  const int h = read_header_int(in, path);
  const int maxval = read_header_int(in, path);
  if (maxval != 255 || w < 1 || h < 1) {
    throw Error(ErrorCode::MalformedImage, path.string() + ": need 8-bit PPM with positive size");
  }
  in.get(); // single whitespace before raster
  Image img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw Error(ErrorCode::MalformedImage, path.string() + ": truncated raster");
  }
  return img;
}

} // namespace grp
