#pragma once

#include "grp/cloud.hpp"
#include "grp/image.hpp"
#include "grp/proposal.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace grp {

enum class Shape { Box, Sphere, Cylinder };

std::string_view to_string(Shape shape) noexcept;
Shape parse_shape(std::string_view text);

/// One solid-colored object. `dimensions` means: box -> full edge lengths
/// (x, y, z); sphere -> radius in x; cylinder -> radius in x, height in z
/// (the axis runs along z, i.e. along the table normal).
struct ObjectSpec {
  Shape shape = Shape::Box;
  Point3 dimensions{ 0.1, 0.1, 0.1 };
  Point3 centroid{ 0.0, 0.0, 1.0 };
  Rgb color{ 224, 32, 32 };
  std::string label = "object";

  Point3 half_extents() const noexcept;
  double surface_area() const noexcept;
};

enum class CameraMotion { None, LeftRight, HighLow };

std::string_view to_string(CameraMotion motion) noexcept;
CameraMotion parse_motion(std::string_view text);

/// Tabletop scene expressed in the optical frame of the sensor at rest: the
/// table is the plane z = table_z facing the camera and objects float just
/// above it (smaller z). Moving scenes translate the sensor between frames.
struct SceneSpec {
  std::string name = "scene";
  double table_x_min = -0.5;
  double table_x_max = 0.5;
  double table_y_min = -0.375;
  double table_y_max = 0.375;
  double table_z = 1.1;
  Rgb table_color{ 160, 96, 32 };
  Rgb background{ 16, 16, 16 };
  std::vector<ObjectSpec> objects;
  double spacing = 0.004;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  std::size_t point_budget = 0; // exact cloud size when > 0
  CameraMotion motion = CameraMotion::None;
  double travel = 1.0;             // meters swept over travel_frames
  std::size_t travel_frames = 100; // frames per one-way sweep
  double min_gap = 0.02;           // the cluster tolerance scenes must respect
  double min_clearance = 0.015;    // object underside to table
  CameraModel camera;

  /// Throws InvalidSpec on overlapping/too-close objects, objects below the
  /// table or off its footprint, or any object leaving the image at either
  /// end of the camera sweep.
  void validate() const;

  /// Sensor displacement for a frame (ping-pong sweep centered on rest).
  Point3 camera_offset(std::size_t frame) const noexcept;
};

struct TruthObject {
  std::string label;
  Point3 centroid;
  BBox3 extents;
  BBox2 bbox2; // unexpanded projection of the extents
};

struct GroundTruth {
  std::vector<TruthObject> objects;
  PassthroughBounds table_bounds; // in the frame's sensor coordinates
  Point3 camera_offset;
};

struct SynthFrame {
  PointCloud cloud;
  Image image;
  GroundTruth truth;
};

/// Surface-sampled cloud with Gaussian noise seeded by (seed, frame), a
/// ray-cast image (nearest surface wins per pixel) and exact ground truth.
SynthFrame synth_frame(const SceneSpec& spec, std::size_t frame_index);

/// Cloud part of synth_frame only.
PointCloud synth_cloud(const SceneSpec& spec, std::size_t frame_index);

/// Image part of synth_frame only.
Image render_image(const SceneSpec& spec, std::size_t frame_index);

GroundTruth ground_truth(const SceneSpec& spec, std::size_t frame_index);

/// Template for one synthetic object class.
struct ObjectClass {
  std::string label;
  Shape shape;
  Point3 dimensions;
  Rgb color;

  ObjectSpec at(const Point3& centroid) const { return { shape, dimensions, centroid, color, label }; }
};

/// The 19 synthetic classes used by the replica dataset and the suite.
const std::vector<ObjectClass>& class_catalog();

/// Table colors of the suite: regular, light ("tablecloth") and dark.
inline constexpr Rgb kTableRegular{ 160, 96, 32 };
inline constexpr Rgb kTableLight{ 224, 224, 224 };
inline constexpr Rgb kTableDark{ 32, 32, 32 };

inline constexpr double kSuiteSpacing = 0.003;
inline constexpr double kSuiteNoise = 0.002;
inline constexpr double kSuiteGap = 0.05;
inline constexpr double kSuiteTravel = 0.3;

/// 40 scenes: 20 regular, 5 light table, 5 dark table, 5 left-right and 5
/// high-low camera sweeps; 3 to 8 objects each.
std::vector<SceneSpec> standard_suite(std::uint64_t seed = 2017);

/// Scene holding one object of `object_class` placed at random on the
/// regular table; `variant` picks the placement.
SceneSpec single_object_scene(const ObjectClass& object_class, std::uint64_t seed,
                              std::uint64_t variant);

/// Five-object scene with exactly 640 * 480 points.
SceneSpec bench_scene(std::uint64_t seed = 7);

/// Table plane only.
SceneSpec empty_scene(std::uint64_t seed = 1);

} // namespace grp
