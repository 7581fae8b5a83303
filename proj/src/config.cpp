#include "grp/config.hpp"

#include "grp/error.hpp"
#include "grp/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace grp {

namespace {

[[noreturn]] void
bad(const std::string& what)
{
  throw Error(ErrorCode::InvalidConfig, what);
}

double
num(const Settings& s, const std::string& key, double fallback)
{
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  try {
    return parse_double(it->second, key);
  } catch (const Error&) {
    bad(key + ": not a number: '" + it->second + "'");
  }
}

long long
integer(const Settings& s, const std::string& key, long long fallback)
{
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  try {
    return parse_int(it->second, key);
  } catch (const Error&) {
    bad(key + ": not an integer: '" + it->second + "'");
  }
}

std::uint64_t
unsigned64(const Settings& s, const std::string& key, std::uint64_t fallback)
{
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  std::uint64_t v = 0;
  const char* b = it->second.data();
  const char* e = b + it->second.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || b == e) bad(key + ": not an unsigned integer: '" + it->second + "'");
  return v;
}

bool
boolean(const Settings& s, const std::string& key, bool fallback)
{
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "on") return true;
  if (it->second == "false" || it->second == "0" || it->second == "off") return false;
  bad(key + ": not a boolean: '" + it->second + "'");
}

std::optional<double>
bound(const Settings& s, const std::string& key, std::optional<double> fallback)
{
  const auto it = s.find(key);
  if (it == s.end()) return fallback;
  if (it->second == "none") return std::nullopt;
  return num(s, key, 0.0);
}

std::vector<double>
numbers(const Settings& s, const std::string& key, std::size_t count)
{
  const auto parts = split(s.at(key), ',');
  if (parts.size() != count) bad(key + ": expected " + std::to_string(count) + " values");
  std::vector<double> out;
  for (const auto& p : parts) {
    try {
      out.push_back(parse_double(trim(p), key));
    } catch (const Error&) {
      bad(key + ": not a number: '" + std::string(p) + "'");
    }
  }
  return out;
}

Point3
vec3(const Settings& s, const std::string& key, Point3 fallback)
{
  if (!s.count(key)) return fallback;
  const auto v = numbers(s, key, 3);
  return { v[0], v[1], v[2] };
}

Rgb
color(const Settings& s, const std::string& key, Rgb fallback)
{
  if (!s.count(key)) return fallback;
  const auto v = numbers(s, key, 3);
  for (double c : v) {
    if (!(c >= 0 && c <= 255) || c != static_cast<int>(c)) bad(key + ": color channels are 0..255");
  }
  return { static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
           static_cast<std::uint8_t>(v[2]) };
}

std::string
vec_text(const Point3& p)
{
  return format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z);
}

std::string
color_text(Rgb c)
{
  return std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b);
}

const std::vector<std::string>&
camera_keys()
{
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{ "camera.fi", "camera.fj", "camera.ci", "camera.cj" };
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) k.push_back("camera.r" + std::to_string(r) + std::to_string(c));
    k.insert(k.end(), { "camera.t0", "camera.t1", "camera.t2", "camera.width", "camera.height" });
    return k;
  }();
  return keys;
}

CameraModel
camera_from(const Settings& s)
{
  CameraModel c;
  c.fi = num(s, "camera.fi", c.fi);
  c.fj = num(s, "camera.fj", c.fj);
  c.ci = num(s, "camera.ci", c.ci);
  c.cj = num(s, "camera.cj", c.cj);
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      c.rotation[3 * r + k] =
        num(s, "camera.r" + std::to_string(r) + std::to_string(k), c.rotation[3 * r + k]);
    }
  }
  c.translation = { num(s, "camera.t0", 0.0), num(s, "camera.t1", 0.0), num(s, "camera.t2", 0.0) };
  c.width = static_cast<int>(integer(s, "camera.width", c.width));
  c.height = static_cast<int>(integer(s, "camera.height", c.height));
  return c;
}

void
camera_into(Settings& s, const CameraModel& c)
{
  s["camera.fi"] = format_double(c.fi);
  s["camera.fj"] = format_double(c.fj);
  s["camera.ci"] = format_double(c.ci);
  s["camera.cj"] = format_double(c.cj);
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k)
      s["camera.r" + std::to_string(r) + std::to_string(k)] = format_double(c.rotation[3 * r + k]);
  s["camera.t0"] = format_double(c.translation.x);
  s["camera.t1"] = format_double(c.translation.y);
  s["camera.t2"] = format_double(c.translation.z);
  s["camera.width"] = std::to_string(c.width);
  s["camera.height"] = std::to_string(c.height);
}

} // namespace

Settings
parse_settings(const std::string& text, const std::string& source)
{
  Settings out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) bad(where + "expected 'key = value'");
    const std::string key(trim(t.substr(0, eq)));
    const std::string value(trim(t.substr(eq + 1)));
    if (key.empty()) bad(where + "empty key");
    if (!out.emplace(key, value).second) bad(where + "duplicate key '" + key + "'");
  }
  return out;
}

Settings
read_settings(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str(), path.string());
}

const std::vector<std::string>&
pipeline_keys()
{
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{ "leaf",
                                "alpha",
                                "passthrough.enabled",
                                "passthrough.x_min",
                                "passthrough.x_max",
                                "passthrough.y_min",
                                "passthrough.y_max",
                                "passthrough.z_min",
                                "passthrough.z_max",
                                "ransac.distance",
                                "ransac.iterations",
                                "ransac.min_fraction",
                                "ransac.refit",
                                "seed",
                                "cluster.tolerance",
                                "cluster.min_size",
                                "cluster.max_size",
                                "border_fraction",
                                "classifier" };
    k.insert(k.end(), camera_keys().begin(), camera_keys().end());
    return k;
  }();
  return keys;
}

std::string
env_name(const std::string& key)
{
  std::string out = "GRP_";
  for (char c : key) {
    out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<std::string>
getenv_lookup(const std::string& name)
{
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

Settings
env_settings(const EnvLookup& lookup)
{
  Settings out;
  for (const auto& key : pipeline_keys()) {
    if (auto v = lookup(env_name(key))) out[key] = std::string(trim(*v));
  }
  return out;
}

void
overlay(Settings& base, const Settings& layer)
{
  const bool leaf = layer.count("leaf") != 0;
  const bool alpha = layer.count("alpha") != 0;
  if (leaf && alpha) bad("leaf and alpha are mutually exclusive");
  if (leaf) base.erase("alpha");
  if (alpha) base.erase("leaf");
  for (const auto& [k, v] : layer) base[k] = v;
}

PipelineConfig
pipeline_config(const Settings& s)
{
  const std::set<std::string> known(pipeline_keys().begin(), pipeline_keys().end());
  for (const auto& [k, v] : s) {
    if (!known.count(k)) bad("unknown key '" + k + "'");
  }
  if (s.count("leaf") && s.count("alpha")) bad("leaf and alpha are mutually exclusive");

  PipelineConfig c;
  if (s.count("leaf")) {
    c.leaf = num(s, "leaf", 0.0);
    c.alpha.reset();
  } else {
    c.alpha = num(s, "alpha", *c.alpha);
  }
  c.passthrough_enabled = boolean(s, "passthrough.enabled", c.passthrough_enabled);
  c.passthrough.x.min = bound(s, "passthrough.x_min", c.passthrough.x.min);
  c.passthrough.x.max = bound(s, "passthrough.x_max", c.passthrough.x.max);
  c.passthrough.y.min = bound(s, "passthrough.y_min", c.passthrough.y.min);
  c.passthrough.y.max = bound(s, "passthrough.y_max", c.passthrough.y.max);
  c.passthrough.z.min = bound(s, "passthrough.z_min", c.passthrough.z.min);
  c.passthrough.z.max = bound(s, "passthrough.z_max", c.passthrough.z.max);
  c.ransac.distance_threshold = num(s, "ransac.distance", c.ransac.distance_threshold);
  c.ransac.max_iterations = static_cast<int>(integer(s, "ransac.iterations", c.ransac.max_iterations));
  c.ransac.min_inlier_fraction = num(s, "ransac.min_fraction", c.ransac.min_inlier_fraction);
  c.ransac.refit = boolean(s, "ransac.refit", c.ransac.refit);
  c.ransac.seed = unsigned64(s, "seed", c.ransac.seed);
  c.cluster.tolerance = num(s, "cluster.tolerance", c.cluster.tolerance);
  const long long mn = integer(s, "cluster.min_size", static_cast<long long>(c.cluster.min_size));
  const long long mx = integer(s, "cluster.max_size", static_cast<long long>(c.cluster.max_size));
  if (mn < 0 || mx < 0) bad("cluster sizes must be >= 0");
  c.cluster.min_size = static_cast<std::size_t>(mn);
  c.cluster.max_size = static_cast<std::size_t>(mx);
  c.border_fraction = num(s, "border_fraction", c.border_fraction);
  if (auto it = s.find("classifier"); it != s.end()) c.classifier = it->second;
  c.camera = camera_from(s);
  c.validate();
  return c;
}

Settings
to_settings(const PipelineConfig& c)
{
  Settings s;
  if (c.leaf) s["leaf"] = format_double(*c.leaf);
  if (c.alpha) s["alpha"] = format_double(*c.alpha);
  s["passthrough.enabled"] = c.passthrough_enabled ? "true" : "false";
  const auto b = [](const std::optional<double>& v) { return v ? format_double(*v) : "none"; };
  s["passthrough.x_min"] = b(c.passthrough.x.min);
  s["passthrough.x_max"] = b(c.passthrough.x.max);
  s["passthrough.y_min"] = b(c.passthrough.y.min);
  s["passthrough.y_max"] = b(c.passthrough.y.max);
  s["passthrough.z_min"] = b(c.passthrough.z.min);
  s["passthrough.z_max"] = b(c.passthrough.z.max);
  s["ransac.distance"] = format_double(c.ransac.distance_threshold);
  s["ransac.iterations"] = std::to_string(c.ransac.max_iterations);
  s["ransac.min_fraction"] = format_double(c.ransac.min_inlier_fraction);
  s["ransac.refit"] = c.ransac.refit ? "true" : "false";
  s["seed"] = std::to_string(c.ransac.seed);
  s["cluster.tolerance"] = format_double(c.cluster.tolerance);
  s["cluster.min_size"] = std::to_string(c.cluster.min_size);
  s["cluster.max_size"] = std::to_string(c.cluster.max_size);
  s["border_fraction"] = format_double(c.border_fraction);
  s["classifier"] = c.classifier;
  camera_into(s, c.camera);
  return s;
}

std::string
format_settings(const Settings& settings)
{
  std::string out;
  for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
  return out;
}

SceneSpec
scene_from_settings(const Settings& s)
{
  static const std::set<std::string> scalar{ "name", "table.x_min", "table.x_max", "table.y_min",
                                             "table.y_max", "table.z", "table.color", "background",
                                             "spacing", "noise_sigma", "seed", "point_budget",
                                             "motion", "travel", "travel_frames", "min_gap",
                                             "min_clearance" };
  const std::set<std::string> cam(camera_keys().begin(), camera_keys().end());
  std::set<long long> object_ids;
  for (const auto& [k, v] : s) {
    if (scalar.count(k) || cam.count(k)) continue;
    if (k.rfind("object.", 0) == 0) {
      const auto dot = k.find('.', 7);
      if (dot != std::string::npos) {
        const std::string field = k.substr(dot + 1);
        long long id = -1;
        try {
          id = parse_int(k.substr(7, dot - 7), "object index");
        } catch (const Error&) {
        }
        if (id >= 0 && (field == "shape" || field == "dimensions" || field == "centroid" ||
                        field == "color" || field == "label")) {
          object_ids.insert(id);
          continue;
        }
      }
    }
    bad("unknown scene key '" + k + "'");
  }

  SceneSpec spec;
  if (auto it = s.find("name"); it != s.end()) spec.name = it->second;
  spec.table_x_min = num(s, "table.x_min", spec.table_x_min);
  spec.table_x_max = num(s, "table.x_max", spec.table_x_max);
  spec.table_y_min = num(s, "table.y_min", spec.table_y_min);
  spec.table_y_max = num(s, "table.y_max", spec.table_y_max);
  spec.table_z = num(s, "table.z", spec.table_z);
  spec.table_color = color(s, "table.color", spec.table_color);
  spec.background = color(s, "background", spec.background);
  spec.spacing = num(s, "spacing", spec.spacing);
  spec.noise_sigma = num(s, "noise_sigma", spec.noise_sigma);
  spec.seed = unsigned64(s, "seed", spec.seed);
  const long long budget = integer(s, "point_budget", 0);
  const long long frames = integer(s, "travel_frames", static_cast<long long>(spec.travel_frames));
  if (budget < 0 || frames < 0) bad("point_budget and travel_frames must be >= 0");
  spec.point_budget = static_cast<std::size_t>(budget);
  spec.travel_frames = static_cast<std::size_t>(frames);
  if (auto it = s.find("motion"); it != s.end()) {
    try {
      spec.motion = parse_motion(it->second);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  spec.travel = num(s, "travel", spec.travel);
  spec.min_gap = num(s, "min_gap", spec.min_gap);
  spec.min_clearance = num(s, "min_clearance", spec.min_clearance);
  spec.camera = camera_from(s);

  for (long long id : object_ids) {
    const std::string p = "object." + std::to_string(id) + ".";
    ObjectSpec o;
    if (auto it = s.find(p + "shape"); it != s.end()) {
      try {
        o.shape = parse_shape(it->second);
      } catch (const Error& e) {
        bad(e.what());
      }
    }
    o.dimensions = vec3(s, p + "dimensions", o.dimensions);
    o.centroid = vec3(s, p + "centroid", o.centroid);
    o.color = color(s, p + "color", o.color);
    if (auto it = s.find(p + "label"); it != s.end()) o.label = it->second;
    spec.objects.push_back(o);
  }
  return spec;
}

Settings
scene_settings(const SceneSpec& spec)
{
  Settings s;
  s["name"] = spec.name;
  s["table.x_min"] = format_double(spec.table_x_min);
  s["table.x_max"] = format_double(spec.table_x_max);
  s["table.y_min"] = format_double(spec.table_y_min);
  s["table.y_max"] = format_double(spec.table_y_max);
  s["table.z"] = format_double(spec.table_z);
  s["table.color"] = color_text(spec.table_color);
  s["background"] = color_text(spec.background);
  s["spacing"] = format_double(spec.spacing);
  s["noise_sigma"] = format_double(spec.noise_sigma);
  s["seed"] = std::to_string(spec.seed);
  s["point_budget"] = std::to_string(spec.point_budget);
  s["motion"] = std::string(to_string(spec.motion));
  s["travel"] = format_double(spec.travel);
  s["travel_frames"] = std::to_string(spec.travel_frames);
  s["min_gap"] = format_double(spec.min_gap);
  s["min_clearance"] = format_double(spec.min_clearance);
  camera_into(s, spec.camera);
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    const auto& o = spec.objects[k];
    const std::string p = "object." + std::to_string(k) + ".";
    s[p + "shape"] = std::string(to_string(o.shape));
    s[p + "dimensions"] = vec_text(o.dimensions);
    s[p + "centroid"] = vec_text(o.centroid);
    s[p + "color"] = color_text(o.color);
    s[p + "label"] = o.label;
  }
  return s;
}

} // namespace grp
