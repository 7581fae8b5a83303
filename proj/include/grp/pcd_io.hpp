#pragma once

#include "grp/cloud.hpp"

#include <filesystem>

namespace grp {

struct PcdLoadStats {
  std::size_t declared_points = 0;
  std::size_t dropped_nan = 0;
};

/// Reads the ASCII PCD subset (FIELDS "x y z rgb" or "x y z", HEIGHT 1,
/// DATA ascii). Rows holding a NaN coordinate are dropped and counted in
/// `stats`. rgb is read as a packed decimal integer r*65536 + g*256 + b; a
/// float-formatted rgb (as some writers emit) is reinterpreted bitwise.
PointCloud load_pcd(const std::filesystem::path& path, PcdLoadStats* stats = nullptr);

/// Writes the ASCII PCD subset. Coordinates use the shortest decimal form
/// that round-trips the double exactly.
void save_pcd(const PointCloud& cloud, const std::filesystem::path& path);

} // namespace grp
