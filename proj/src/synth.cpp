#include "grp/synth.hpp"

#include "grp/error.hpp"
#include "grp/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace grp {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double>
grid_line(double a, double b, double spacing)
{
  const double span = b - a;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / spacing - 1e-9)));
  std::vector<double> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    out[k] = a + span * static_cast<double>(k) / static_cast<double>(steps);
  }
  out.back() = b;
  return out;
}

struct Sample {
  Point3 p;
  Rgb color;
};

void
sample_box(const ObjectSpec& o, double s, std::vector<Sample>& out)
{
  const Point3 h = o.half_extents();
  const Point3 lo = o.centroid - h;
  const Point3 hi = o.centroid + h;
  const auto xs = grid_line(lo.x, hi.x, s);
  const auto ys = grid_line(lo.y, hi.y, s);
  const auto zs = grid_line(lo.z, hi.z, s);
  for (double zf : { lo.z, hi.z }) {
    for (double y : ys)
      for (double x : xs) out.push_back({ { x, y, zf }, o.color });
  }
  for (double yf : { lo.y, hi.y }) {
    for (double z : zs)
      for (double x : xs) out.push_back({ { x, yf, z }, o.color });
  }
  for (double xf : { lo.x, hi.x }) {
    for (double z : zs)
      for (double y : ys) out.push_back({ { xf, y, z }, o.color });
  }
}

void
sample_sphere(const ObjectSpec& o, double s, std::vector<Sample>& out)
{
  const double r = o.dimensions.x;
  const auto n = static_cast<std::size_t>(std::max(64.0, std::round(4.0 * kPi * r * r / (s * s))));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(n);
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    out.push_back({ o.centroid + r * Point3{ rad * std::cos(phi), rad * std::sin(phi), z }, o.color });
  }
}

void
sample_cylinder(const ObjectSpec& o, double s, std::vector<Sample>& out)
{
  const double r = o.dimensions.x;
  const double hh = 0.5 * o.dimensions.z;
  const auto ring = [&](double rho, double z) {
    if (rho <= 0.0) {
      out.push_back({ o.centroid + Point3{ 0.0, 0.0, z }, o.color });
      return;
    }
    const auto n = static_cast<std::size_t>(std::max(6.0, std::ceil(2.0 * kPi * rho / s)));
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
      out.push_back({ o.centroid + Point3{ rho * std::cos(t), rho * std::sin(t), z }, o.color });
    }
  };
  for (double z : grid_line(-hh, hh, s)) ring(r, z);
  const auto radii = grid_line(0.0, r, s);
  for (double z : { -hh, hh }) {
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) ring(radii[k], z);
  }
}

std::vector<Sample>
sample_scene(const SceneSpec& spec, double s)
{
  std::vector<Sample> out;
  const auto xs = grid_line(spec.table_x_min, spec.table_x_max, s);
  const auto ys = grid_line(spec.table_y_min, spec.table_y_max, s);
  out.reserve(xs.size() * ys.size() + 4096);
  for (double y : ys)
    for (double x : xs) out.push_back({ { x, y, spec.table_z }, spec.table_color });
  for (const auto& o : spec.objects) {
    switch (o.shape) {
      case Shape::Box: sample_box(o, s, out); break;
      case Shape::Sphere: sample_sphere(o, s, out); break;
      case Shape::Cylinder: sample_cylinder(o, s, out); break;
    }
  }
  return out;
}

double
scene_area(const SceneSpec& spec)
{
  double a = (spec.table_x_max - spec.table_x_min) * (spec.table_y_max - spec.table_y_min);
  for (const auto& o : spec.objects) a += o.surface_area();
  return a;
}

double
aabb_gap(const ObjectSpec& a, const ObjectSpec& b)
{
  const Point3 ha = a.half_extents();
  const Point3 hb = b.half_extents();
  const auto axis = [](double ca, double ea, double cb, double eb) {
    return std::max(0.0, std::abs(ca - cb) - ea - eb);
  };
  const double gx = axis(a.centroid.x, ha.x, b.centroid.x, hb.x);
  const double gy = axis(a.centroid.y, ha.y, b.centroid.y, hb.y);
  const double gz = axis(a.centroid.z, ha.z, b.centroid.z, hb.z);
  return std::sqrt(gx * gx + gy * gy + gz * gz);
}

// Ray hit distance along a unit-free direction, or nullopt.
std::optional<double>
hit_box(const Point3& o, const Point3& d, const Point3& lo, const Point3& hi)
{
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const std::array<double, 3> oo{ o.x, o.y, o.z }, dd{ d.x, d.y, d.z }, ll{ lo.x, lo.y, lo.z },
    hh{ hi.x, hi.y, hi.z };
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dd[a]) < 1e-15) {
      if (oo[a] < ll[a] || oo[a] > hh[a]) return std::nullopt;
      continue;
    }
    double ta = (ll[a] - oo[a]) / dd[a];
    double tb = (hh[a] - oo[a]) / dd[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return t0 > 0.0 ? std::optional<double>(t0) : std::nullopt;
}

std::optional<double>
hit_sphere(const Point3& o, const Point3& d, const Point3& c, double r)
{
  const Point3 oc = o - c;
  const double a = dot(d, d);
  const double b = 2.0 * dot(oc, d);
  const double cc = dot(oc, oc) - r * r;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) return std::nullopt;
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  return t > 0.0 ? std::optional<double>(t) : std::nullopt;
}

std::optional<double>
hit_cylinder(const Point3& o, const Point3& d, const Point3& c, double r, double hh)
{
  std::optional<double> best;
  const auto consider = [&](double t) {
    if (t > 0.0 && (!best || t < *best)) best = t;
  };
  const double ox = o.x - c.x, oy = o.y - c.y;
  const double a = d.x * d.x + d.y * d.y;
  if (a > 1e-15) {
    const double b = 2.0 * (ox * d.x + oy * d.y);
    const double cc = ox * ox + oy * oy - r * r;
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double t = (-b - std::sqrt(disc)) / (2.0 * a);
      const double z = o.z + t * d.z - c.z;
      if (std::abs(z) <= hh) consider(t);
    }
  }
  if (std::abs(d.z) > 1e-15) {
    for (double zc : { c.z - hh, c.z + hh }) {
      const double t = (zc - o.z) / d.z;
      const double x = o.x + t * d.x - c.x;
      const double y = o.y + t * d.y - c.y;
      if (x * x + y * y <= r * r) consider(t);
    }
  }
  return best;
}

std::optional<double>
hit_object(const ObjectSpec& obj, const Point3& o, const Point3& d)
{
  switch (obj.shape) {
    case Shape::Box: {
      const Point3 h = obj.half_extents();
      return hit_box(o, d, obj.centroid - h, obj.centroid + h);
    }
    case Shape::Sphere: return hit_sphere(o, d, obj.centroid, obj.dimensions.x);
    case Shape::Cylinder:
      return hit_cylinder(o, d, obj.centroid, obj.dimensions.x, 0.5 * obj.dimensions.z);
  }
  return std::nullopt;
}

bool
valid_label(const std::string& label)
{
  if (label.empty() || label == "error") return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

void
check_in_view(const SceneSpec& spec, const ObjectSpec& o, const Point3& offset)
{
  const Point3 h = o.half_extents();
  for (int corner = 0; corner < 8; ++corner) {
    const Point3 p = Point3{ o.centroid.x + ((corner & 1) ? h.x : -h.x),
                             o.centroid.y + ((corner & 2) ? h.y : -h.y),
                             o.centroid.z + ((corner & 4) ? h.z : -h.z) } -
                     offset;
    PixelCoord px;
    const bool ok = try_project(spec.camera, p, px) && spec.camera.to_rgb_frame(p).z > 0.05 &&
                    px.i >= 0.0 && px.i < spec.camera.width && px.j >= 0.0 &&
                    px.j < spec.camera.height;
    if (!ok) {
      throw Error(ErrorCode::InvalidSpec,
                  spec.name + ": object '" + o.label + "' leaves the camera frustum");
    }
  }
}

} // namespace

std::string_view
to_string(Shape shape) noexcept
{
  switch (shape) {
    case Shape::Box: return "box";
    case Shape::Sphere: return "sphere";
    case Shape::Cylinder: return "cylinder";
  }
  return "box";
}

Shape
parse_shape(std::string_view text)
{
  if (text == "box") return Shape::Box;
  if (text == "sphere") return Shape::Sphere;
  if (text == "cylinder") return Shape::Cylinder;
  throw Error(ErrorCode::InvalidSpec, "unknown shape '" + std::string(text) + "'");
}

std::string_view
to_string(CameraMotion motion) noexcept
{
  switch (motion) {
    case CameraMotion::None: return "none";
    case CameraMotion::LeftRight: return "left_right";
    case CameraMotion::HighLow: return "high_low";
  }
  return "none";
}

CameraMotion
parse_motion(std::string_view text)
{
  if (text == "none") return CameraMotion::None;
  if (text == "left_right") return CameraMotion::LeftRight;
  if (text == "high_low") return CameraMotion::HighLow;
  throw Error(ErrorCode::InvalidSpec, "unknown camera motion '" + std::string(text) + "'");
}

Point3
ObjectSpec::half_extents() const noexcept
{
  switch (shape) {
    case Shape::Box: return 0.5 * dimensions;
    case Shape::Sphere: return { dimensions.x, dimensions.x, dimensions.x };
    case Shape::Cylinder: return { dimensions.x, dimensions.x, 0.5 * dimensions.z };
  }
  return 0.5 * dimensions;
}

double
ObjectSpec::surface_area() const noexcept
{
  switch (shape) {
    case Shape::Box:
      return 2.0 * (dimensions.x * dimensions.y + dimensions.y * dimensions.z +
                    dimensions.x * dimensions.z);
    case Shape::Sphere: return 4.0 * kPi * dimensions.x * dimensions.x;
    case Shape::Cylinder:
      return 2.0 * kPi * dimensions.x * (dimensions.x + dimensions.z);
  }
  return 0.0;
}

Point3
SceneSpec::camera_offset(std::size_t frame) const noexcept
{
  if (motion == CameraMotion::None || travel_frames < 2) return {};
  const std::size_t leg = travel_frames - 1;
  const std::size_t k = frame % (2 * leg);
  const double s = static_cast<double>(k <= leg ? k : 2 * leg - k) / static_cast<double>(leg);
  const double shift = -0.5 * travel + travel * s;
  return motion == CameraMotion::LeftRight ? Point3{ shift, 0.0, 0.0 } : Point3{ 0.0, 0.0, shift };
}

void
SceneSpec::validate() const
{
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidSpec, name + ": " + why);
  };
  if (!(table_x_min < table_x_max) || !(table_y_min < table_y_max)) fail("empty table extents");
  if (!(table_z > 0.0)) fail("table must lie in front of the sensor");
  if (!(spacing > 0.0)) fail("spacing must be > 0");
  if (!(noise_sigma >= 0.0)) fail("noise sigma must be >= 0");
  if (!(travel >= 0.0)) fail("travel must be >= 0");
  if (motion != CameraMotion::None && travel_frames < 2) fail("travel_frames must be >= 2");
  if (!(min_gap > 0.0) || !(min_clearance >= 0.0)) fail("bad gap/clearance");
  try {
    camera.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  const double margin = 2.0 * 3.0 * noise_sigma;
  for (std::size_t a = 0; a < objects.size(); ++a) {
    const auto& o = objects[a];
    if (!valid_label(o.label)) fail("invalid label '" + o.label + "'");
    const Point3 h = o.half_extents();
    if (!(h.x > 0.0 && h.y > 0.0 && h.z > 0.0)) fail("object '" + o.label + "' has no volume");
    if (o.centroid.z + h.z > table_z - min_clearance) {
      fail("object '" + o.label + "' is not above the table plane");
    }
    if (o.centroid.x - h.x < table_x_min || o.centroid.x + h.x > table_x_max ||
        o.centroid.y - h.y < table_y_min || o.centroid.y + h.y > table_y_max) {
      fail("object '" + o.label + "' overhangs the table");
    }
    for (std::size_t b = a + 1; b < objects.size(); ++b) {
      if (!(aabb_gap(o, objects[b]) > min_gap + margin)) {
        fail("objects '" + o.label + "' and '" + objects[b].label + "' are too close");
      }
    }
  }
  std::vector<Point3> offsets{ Point3{} };
  if (motion != CameraMotion::None) {
    offsets.push_back(camera_offset(0));
    offsets.push_back(camera_offset(travel_frames - 1));
  }
  for (const auto& off : offsets) {
    for (const auto& o : objects) check_in_view(*this, o, off);
  }
}

PointCloud
synth_cloud(const SceneSpec& spec, std::size_t frame_index)
{
  spec.validate();
  std::vector<Sample> samples = sample_scene(spec, spec.spacing);
  if (spec.point_budget > 0) {
    double s = std::min(spec.spacing,
                        0.98 * std::sqrt(scene_area(spec) / static_cast<double>(spec.point_budget)));
    samples = sample_scene(spec, s);
    while (samples.size() < spec.point_budget) {
      s *= 0.95;
      samples = sample_scene(spec, s);
    }
    // exact budget via a seeded partial Fisher-Yates, original order kept
    SplitMix64 pick(mix_seed(spec.seed, 0xB0D6E7ULL + frame_index));
    std::vector<std::uint32_t> idx(samples.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<std::uint32_t>(k);
    for (std::size_t k = 0; k < spec.point_budget; ++k) {
      const std::size_t j = k + pick.index(idx.size() - k);
      std::swap(idx[k], idx[j]);
    }
    idx.resize(spec.point_budget);
    std::sort(idx.begin(), idx.end());
    std::vector<Sample> kept(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) kept[k] = samples[idx[k]];
    samples = std::move(kept);
  }

  const Point3 offset = spec.camera_offset(frame_index);
  PointCloud cloud;
  cloud.frame_id = "camera_optical";
  cloud.timestamp = static_cast<double>(frame_index) / 5.0; // 5 Hz capture
  cloud.points.resize(samples.size());
  SplitMix64 noise(mix_seed(spec.seed, frame_index));
  const double sigma = spec.noise_sigma;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    Point3 p = samples[k].p - offset;
    if (sigma > 0.0) {
      p.x += sigma * noise.gaussian();
      p.y += sigma * noise.gaussian();
      p.z += sigma * noise.gaussian();
    }
    cloud.points[k] = { p, samples[k].color.r, samples[k].color.g, samples[k].color.b };
  }
  return cloud;
}

Image
render_image(const SceneSpec& spec, std::size_t frame_index)
{
  const CameraModel& cam = spec.camera;
  const Point3 offset = spec.camera_offset(frame_index);
  const auto& R = cam.rotation;
  // RGB camera center in scene coordinates: offset - R^T t
  const Point3& t = cam.translation;
  const Point3 origin = offset - Point3{ R[0] * t.x + R[3] * t.y + R[6] * t.z,
                                         R[1] * t.x + R[4] * t.y + R[7] * t.z,
                                         R[2] * t.x + R[5] * t.y + R[8] * t.z };

  // pixel windows per object to skip hopeless rays
  struct Window {
    int u0, v0, u1, v1;
  };
  std::vector<Window> windows;
  for (const auto& o : spec.objects) {
    const Point3 h = o.half_extents();
    Window w{ 0, 0, cam.width, cam.height };
    try {
      const BBox2 b = project_bbox(cam, BBox3::from_extents(o.centroid - h - offset,
                                                            o.centroid + h - offset));
      w = { std::max(0, b.u_min - 2), std::max(0, b.v_min - 2), std::min(cam.width, b.u_max + 2),
            std::min(cam.height, b.v_max + 2) };
    } catch (const Error&) {
    }
    windows.push_back(w);
  }

  Image img(cam.width, cam.height, spec.background);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const Point3 d_rgb{ (u - cam.ci) / cam.fi, (v - cam.cj) / cam.fj, 1.0 };
      const Point3 d{ R[0] * d_rgb.x + R[3] * d_rgb.y + R[6] * d_rgb.z,
                      R[1] * d_rgb.x + R[4] * d_rgb.y + R[7] * d_rgb.z,
                      R[2] * d_rgb.x + R[5] * d_rgb.y + R[8] * d_rgb.z };
      double best = std::numeric_limits<double>::infinity();
      Rgb color = spec.background;
      if (std::abs(d.z) > 1e-15) {
        const double tt = (spec.table_z - origin.z) / d.z;
        const double x = origin.x + tt * d.x;
        const double y = origin.y + tt * d.y;
        if (tt > 0.0 && x >= spec.table_x_min && x <= spec.table_x_max && y >= spec.table_y_min &&
            y <= spec.table_y_max) {
          best = tt;
          color = spec.table_color;
        }
      }
      for (std::size_t k = 0; k < spec.objects.size(); ++k) {
        const Window& w = windows[k];
        if (u < w.u0 || u >= w.u1 || v < w.v0 || v >= w.v1) continue;
        const auto hit = hit_object(spec.objects[k], origin, d);
        if (hit && *hit < best) {
          best = *hit;
          color = spec.objects[k].color;
        }
      }
      img.set(u, v, color);
    }
  }
  return img;
}

GroundTruth
ground_truth(const SceneSpec& spec, std::size_t frame_index)
{
  GroundTruth truth;
  const Point3 offset = spec.camera_offset(frame_index);
  truth.camera_offset = offset;
  for (const auto& o : spec.objects) {
    TruthObject t;
    t.label = o.label;
    t.centroid = o.centroid - offset;
    const Point3 h = o.half_extents();
    t.extents = BBox3::from_extents(o.centroid - h - offset, o.centroid + h - offset);
    try {
      t.bbox2 = project_bbox(spec.camera, t.extents);
    } catch (const Error&) {
      t.bbox2 = {};
    }
    truth.objects.push_back(std::move(t));
  }
  constexpr double pad = 0.02;
  truth.table_bounds.x = { spec.table_x_min - offset.x - pad, spec.table_x_max - offset.x + pad };
  truth.table_bounds.y = { spec.table_y_min - offset.y - pad, spec.table_y_max - offset.y + pad };
  truth.table_bounds.z = { spec.table_z - offset.z - 0.5, spec.table_z - offset.z + 0.05 };
  return truth;
}

SynthFrame
synth_frame(const SceneSpec& spec, std::size_t frame_index)
{
  SynthFrame f;
  f.cloud = synth_cloud(spec, frame_index);
  f.image = render_image(spec, frame_index);
  f.truth = ground_truth(spec, frame_index);
  return f;
}

const std::vector<ObjectClass>&
class_catalog()
{
  // one histogram bin per class, none shared with a table or the background
  static const std::vector<ObjectClass> catalog{
    { "red_box", Shape::Box, { 0.10, 0.07, 0.08 }, { 224, 32, 32 } },
    { "green_box", Shape::Box, { 0.08, 0.08, 0.08 }, { 32, 224, 32 } },
    { "blue_box", Shape::Box, { 0.12, 0.06, 0.05 }, { 32, 32, 224 } },
    { "yellow_cylinder", Shape::Cylinder, { 0.035, 0.0, 0.14 }, { 224, 224, 32 } },
    { "cyan_cylinder", Shape::Cylinder, { 0.04, 0.0, 0.10 }, { 32, 224, 224 } },
    { "magenta_sphere", Shape::Sphere, { 0.04, 0.0, 0.0 }, { 224, 32, 224 } },
    { "orange_sphere", Shape::Sphere, { 0.045, 0.0, 0.0 }, { 224, 160, 32 } },
    { "purple_box", Shape::Box, { 0.06, 0.06, 0.12 }, { 160, 32, 224 } },
    { "lime_sphere", Shape::Sphere, { 0.035, 0.0, 0.0 }, { 160, 224, 32 } },
    { "teal_cylinder", Shape::Cylinder, { 0.03, 0.0, 0.12 }, { 32, 160, 160 } },
    { "navy_box", Shape::Box, { 0.09, 0.05, 0.06 }, { 32, 32, 160 } },
    { "maroon_cylinder", Shape::Cylinder, { 0.045, 0.0, 0.08 }, { 160, 32, 32 } },
    { "olive_box", Shape::Box, { 0.07, 0.10, 0.05 }, { 160, 160, 32 } },
    { "pink_sphere", Shape::Sphere, { 0.05, 0.0, 0.0 }, { 224, 160, 224 } },
    { "sky_cylinder", Shape::Cylinder, { 0.04, 0.0, 0.15 }, { 96, 160, 224 } },
    { "grey_box", Shape::Box, { 0.05, 0.05, 0.05 }, { 96, 96, 96 } },
    { "forest_sphere", Shape::Sphere, { 0.03, 0.0, 0.0 }, { 32, 96, 32 } },
    { "rust_cylinder", Shape::Cylinder, { 0.035, 0.0, 0.09 }, { 96, 32, 32 } },
    { "violet_box", Shape::Box, { 0.08, 0.06, 0.10 }, { 96, 32, 160 } },
  };
  return catalog;
}

namespace {

// Rejection-samples a valid placement for `classes` on `base`.
std::optional<SceneSpec>
place_objects(SceneSpec base, const std::vector<const ObjectClass*>& classes, SplitMix64& rng,
              double half_x, double half_y)
{
  for (const ObjectClass* cls : classes) {
    bool placed = false;
    for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
      ObjectSpec o = cls->at({});
      const Point3 h = o.half_extents();
      o.centroid = { rng.uniform(-half_x + h.x, half_x - h.x),
                     rng.uniform(-half_y + h.y, half_y - h.y),
                     base.table_z - 0.02 - h.z };
      bool ok = true;
      for (const auto& other : base.objects) {
        if (aabb_gap(o, other) <= kSuiteGap) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      base.objects.push_back(o);
      try {
        base.validate();
        placed = true;
      } catch (const Error&) {
        base.objects.pop_back();
      }
    }
    if (!placed) return std::nullopt;
  }
  return base;
}

} // namespace

std::vector<SceneSpec>
standard_suite(std::uint64_t seed)
{
  const auto& catalog = class_catalog();
  std::vector<SceneSpec> suite;
  for (std::size_t s = 0; s < 40; ++s) {
    SplitMix64 rng(mix_seed(seed, s));
    SceneSpec base;
    base.name = "scene_" + std::string(s + 1 < 10 ? "0" : "") + std::to_string(s + 1);
    base.spacing = kSuiteSpacing;
    base.noise_sigma = kSuiteNoise;
    base.seed = mix_seed(seed, 1000 + s);
    double half_x = 0.4;
    double half_y = 0.3;
    if (s >= 20 && s < 25) base.table_color = kTableLight;
    if (s >= 25 && s < 30) base.table_color = kTableDark;
    if (s >= 30) {
      base.motion = s < 35 ? CameraMotion::LeftRight : CameraMotion::HighLow;
      base.travel = kSuiteTravel;
      base.travel_frames = 100;
      half_x = 0.3;
      half_y = 0.22;
    }
    std::optional<SceneSpec> scene;
    while (!scene) {
      const std::size_t count = 3 + rng.index(6);
      std::vector<const ObjectClass*> pool;
      for (const auto& c : catalog) pool.push_back(&c);
      std::vector<const ObjectClass*> chosen;
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t j = k + rng.index(pool.size() - k);
        std::swap(pool[k], pool[j]);
        chosen.push_back(pool[k]);
      }
      scene = place_objects(base, chosen, rng, half_x, half_y);
    }
    suite.push_back(std::move(*scene));
  }
  return suite;
}

SceneSpec
single_object_scene(const ObjectClass& object_class, std::uint64_t seed, std::uint64_t variant)
{
  SplitMix64 rng(mix_seed(seed, variant));
  SceneSpec base;
  base.name = object_class.label + "_" + std::to_string(variant);
  base.spacing = kSuiteSpacing;
  base.noise_sigma = kSuiteNoise;
  base.seed = mix_seed(seed, variant + 0x5EED);
  while (true) {
    if (auto s = place_objects(base, { &object_class }, rng, 0.32, 0.24)) return *s;
  }
}

SceneSpec
bench_scene(std::uint64_t seed)
{
  const auto& catalog = class_catalog();
  SplitMix64 rng(mix_seed(seed, 77));
  SceneSpec base;
  base.name = "bench";
  base.noise_sigma = kSuiteNoise;
  base.seed = seed;
  base.point_budget = 640 * 480;
  base.spacing = kSuiteSpacing;
  const std::vector<const ObjectClass*> chosen{ &catalog[0], &catalog[3], &catalog[5], &catalog[10],
                                                &catalog[14] };
  while (true) {
    if (auto s = place_objects(base, chosen, rng, 0.4, 0.3)) return *s;
  }
}

SceneSpec
empty_scene(std::uint64_t seed)
{
  SceneSpec s;
  s.name = "empty";
  s.seed = seed;
  s.spacing = kSuiteSpacing;
  return s;
}

} // namespace grp
