#include "grp/pcd_io.hpp"

#include "grp/error.hpp"
#include "grp/text.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace grp {

namespace {

std::vector<std::string>
split_ws(const std::string& line)
{
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::uint32_t
parse_rgb(const std::string& tok, const std::filesystem::path& path)
{
  std::uint64_t packed = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, packed);
  if (ec == std::errc() && p == end) {
    if (packed > 0xFFFFFFu) {
      throw Error(ErrorCode::MalformedHeader,
                  path.string() + ": packed rgb out of range: " + tok);
    }
    return static_cast<std::uint32_t>(packed);
  }
  float f = 0.0f;
  auto [pf, ecf] = std::from_chars(tok.data(), end, f);
  if (ecf != std::errc() || pf != end) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": bad rgb value " + tok);
  }
  return std::bit_cast<std::uint32_t>(f) & 0xFFFFFFu;
}

struct Header {
  bool has_rgb = true;
  std::size_t width = 0;
  std::size_t height = 1;
  std::size_t points = 0;
  bool seen_points = false;
};

} // namespace

PointCloud
load_pcd(const std::filesystem::path& path, PcdLoadStats* stats)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  }
  PointCloud cloud;
  Header h;
  std::string line;
  bool data_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // "# grp frame_id=<id> timestamp=<t>" carries cloud metadata
      const auto toks = split_ws(line.substr(1));
      if (!toks.empty() && toks[0] == "grp") {
        for (std::size_t k = 1; k < toks.size(); ++k) {
          const auto eq = toks[k].find('=');
          if (eq == std::string::npos) continue;
          const auto key = toks[k].substr(0, eq);
          const auto value = toks[k].substr(eq + 1);
          if (key == "frame_id") cloud.frame_id = value;
          else if (key == "timestamp") cloud.timestamp = parse_double(value, "timestamp");
        }
      }
      continue;
    }
    const auto toks = split_ws(line);
    const auto& key = toks[0];
    if (key == "VERSION" || key == "SIZE" || key == "TYPE" || key == "COUNT" ||
        key == "VIEWPOINT") {
      continue;
    }
    if (key == "FIELDS") {
      const std::vector<std::string> xyz{ "FIELDS", "x", "y", "z" };
      const std::vector<std::string> xyzrgb{ "FIELDS", "x", "y", "z", "rgb" };
      if (toks == xyzrgb) h.has_rgb = true;
      else if (toks == xyz) h.has_rgb = false;
      else throw Error(ErrorCode::MalformedHeader, path.string() + ": unsupported " + line);
    } else if (key == "WIDTH" && toks.size() == 2) {
      h.width = parse_size(toks[1], "WIDTH");
    } else if (key == "HEIGHT" && toks.size() == 2) {
      h.height = parse_size(toks[1], "HEIGHT");
    } else if (key == "POINTS" && toks.size() == 2) {
      h.points = parse_size(toks[1], "POINTS");
      h.seen_points = true;
    } else if (key == "DATA") {
      if (toks.size() != 2 || toks[1] != "ascii") {
        throw Error(ErrorCode::NonAsciiData, path.string() + ": only DATA ascii is supported");
      }
      data_seen = true;
      break;
    } else {
      throw Error(ErrorCode::MalformedHeader, path.string() + ": unexpected header line " + line);
    }
  }
  if (!data_seen || !h.seen_points) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": missing POINTS or DATA");
  }
  if (h.height != 1 || h.width != h.points) {
    throw Error(ErrorCode::MalformedHeader,
                path.string() + ": organized clouds are not supported (need HEIGHT 1, WIDTH == POINTS)");
  }

  const std::size_t fields = h.has_rgb ? 4 : 3;
  std::size_t rows = 0;
  std::size_t dropped = 0;
  cloud.points.reserve(h.points);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    ++rows;
    if (rows > h.points) break;
    if (toks.size() != fields) {
      throw Error(ErrorCode::MalformedHeader,
                  path.string() + ": row " + std::to_string(rows) + " has wrong field count");
    }
    ColorPoint p;
    p.position = { parse_double(toks[0], "x"), parse_double(toks[1], "y"),
                   parse_double(toks[2], "z") };
    if (h.has_rgb) {
      const auto rgb = parse_rgb(toks[3], path);
      p.r = static_cast<std::uint8_t>((rgb >> 16) & 0xFF);
      p.g = static_cast<std::uint8_t>((rgb >> 8) & 0xFF);
      p.b = static_cast<std::uint8_t>(rgb & 0xFF);
    }
    if (!is_finite(p.position)) {
      ++dropped;
      continue;
    }
    cloud.points.push_back(p);
  }
  if (rows != h.points) {
    throw Error(ErrorCode::MalformedHeader,
                path.string() + ": POINTS " + std::to_string(h.points) + " but " +
                  std::to_string(rows) + " data rows");
  }
  if (stats) {
    stats->declared_points = h.points;
    stats->dropped_nan = dropped;
  }
  return cloud;
}

void
save_pcd(const PointCloud& cloud, const std::filesystem::path& path)
{
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!is_finite(cloud.points[i].position)) {
      throw Error(ErrorCode::RejectedInvalidPoint,
                  "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  std::ostringstream os;
  const auto n = std::to_string(cloud.size());
  os << "# grp frame_id=" << (cloud.frame_id.empty() ? "none" : cloud.frame_id)
     << " timestamp=" << format_double(cloud.timestamp) << '\n'
     << "VERSION .7\n"
     << "FIELDS x y z rgb\n"
     << "SIZE 4 4 4 4\n"
     << "TYPE F F F U\n"
     << "COUNT 1 1 1 1\n"
     << "WIDTH " << n << '\n'
     << "HEIGHT 1\n"
     << "VIEWPOINT 0 0 0 1 0 0 0\n"
     << "POINTS " << n << '\n'
     << "DATA ascii\n";
  for (const auto& p : cloud.points) {
    const std::uint32_t packed = (std::uint32_t{ p.r } << 16) | (std::uint32_t{ p.g } << 8) | p.b;
    os << format_double(p.position.x) << ' ' << format_double(p.position.y) << ' '
       << format_double(p.position.z) << ' ' << packed << '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  }
  const auto text = os.str();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
  }
}

} // namespace grp
