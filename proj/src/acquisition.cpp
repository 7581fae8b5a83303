#include "grp/acquisition.hpp"

#include "grp/error.hpp"
#include "grp/pcd_io.hpp"
#include "grp/rng.hpp"
#include "grp/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace grp {

namespace fs = std::filesystem;

namespace {

bool
valid_dataset_label(const std::string& label)
{
  if (label.empty() || label == "." || label == "..") return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

} // namespace

void
AcquisitionSession::validate() const
{
  if (labels.empty()) throw Error(ErrorCode::InvalidParams, "session needs at least one label");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!valid_dataset_label(l)) throw Error(ErrorCode::InvalidParams, "invalid label '" + l + "'");
    if (!seen.insert(l).second) throw Error(ErrorCode::InvalidParams, "duplicate label '" + l + "'");
  }
  if (target_count < 1) throw Error(ErrorCode::InvalidParams, "target count must be >= 1");
  if (!(border_fraction >= 0.0)) throw Error(ErrorCode::InvalidParams, "border fraction must be >= 0");
}

DirectoryFrameSource::DirectoryFrameSource(const fs::path& dir) : dir_(dir)
{
  if (!fs::is_directory(dir)) throw Error(ErrorCode::MissingFile, dir.string() + ": no such directory");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pcd") {
      stems_.push_back(entry.path().stem().string());
    }
  }
  std::sort(stems_.begin(), stems_.end());
}

std::optional<Frame>
DirectoryFrameSource::next()
{
  if (pos_ >= stems_.size()) return std::nullopt;
  const std::string& stem = stems_[pos_++];
  const fs::path ppm = dir_ / (stem + ".ppm");
  if (!fs::exists(ppm)) throw Error(ErrorCode::MissingFile, ppm.string() + ": missing image");
  return Frame{ load_pcd(dir_ / (stem + ".pcd")), read_ppm(ppm) };
}

SyntheticFrameSource::SyntheticFrameSource(std::vector<SceneSpec> scenes,
                                           std::size_t frames_per_scene)
  : scenes_(std::move(scenes)), frames_per_scene_(frames_per_scene)
{
}

std::optional<Frame>
SyntheticFrameSource::next()
{
  if (frames_per_scene_ == 0 || scene_ >= scenes_.size()) return std::nullopt;
  const SceneSpec& spec = scenes_[scene_];
  Frame f{ synth_cloud(spec, frame_), render_image(spec, frame_) };
  if (++frame_ == frames_per_scene_) {
    frame_ = 0;
    ++scene_;
  }
  return f;
}

DatasetWriter::DatasetWriter(fs::path root)
{
  manifest_.root = std::move(root);
  if (fs::exists(manifest_.root / kManifestName)) {
    manifest_ = read_manifest(manifest_.root);
    for (const auto& row : manifest_.rows) ++counts_[row.label];
  }
}

const ManifestRow&
DatasetWriter::append(const std::string& label, const Patch& patch, double timestamp,
                      const Point3& centroid)
{
  if (!valid_dataset_label(label)) throw Error(ErrorCode::InvalidParams, "invalid label '" + label + "'");
  std::size_t& n = counts_[label];
  char name[32];
  std::snprintf(name, sizeof name, "%06zu.ppm", n);
  const std::string rel = label + "/" + name;
  std::error_code ec;
  fs::create_directories(manifest_.root / label, ec);
  if (ec) throw Error(ErrorCode::IoFailure, (manifest_.root / label).string() + ": " + ec.message());
  write_ppm(patch.image, manifest_.root / rel);
  ++n;
  manifest_.rows.push_back({ rel, label, timestamp, patch.source, centroid });
  return manifest_.rows.back();
}

std::size_t
DatasetWriter::count(const std::string& label) const
{
  const auto it = counts_.find(label);
  return it == counts_.end() ? 0 : it->second;
}

void
DatasetWriter::flush() const
{
  write_manifest(manifest_);
}

AcquireResult
acquire_class(FrameSource& frames, const std::string& label, const AcquisitionSession& session,
              const CameraModel& camera, const PipelineConfig& config, DatasetWriter& writer)
{
  session.validate();
  config.validate();
  if (std::find(session.labels.begin(), session.labels.end(), label) == session.labels.end()) {
    throw Error(ErrorCode::InvalidParams, "label '" + label + "' is not in the session");
  }
  if (config.border_fraction != session.border_fraction) {
    throw Error(ErrorCode::InvalidConfig,
                "border fraction differs between acquisition session and pipeline config");
  }

  AcquireResult out;
  PipelineConfig fixed = config;
  while (writer.count(label) < session.target_count) {
    std::optional<Frame> frame = frames.next();
    if (!frame) {
      out.stream_ended = true;
      break;
    }
    ProposalSet ps;
    try {
      if (fixed.alpha) fixed = fixed.with_fixed_leaf(frame->cloud);
      ps = propose_regions(frame->cloud, camera, fixed);
    } catch (const Error&) {
      ++out.failed;
      continue;
    }
    if (ps.proposals.empty()) {
      ++out.skipped_empty;
      continue;
    }
    if (ps.proposals.size() > 1) {
      ++out.ambiguous;
      continue;
    }
    const Proposal& p = ps.proposals.front();
    writer.append(label, extract_patch(frame->image, p.bbox2), frame->cloud.timestamp, p.centroid);
    ++out.stored;
  }
  writer.flush();
  return out;
}

void
write_manifest(const DatasetManifest& manifest)
{
  std::error_code ec;
  fs::create_directories(manifest.root, ec);
  const fs::path path = manifest.root / kManifestName;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, path.string() + ": cannot open for writing");
  out << kManifestHeader << '\n';
  for (const auto& r : manifest.rows) {
    out << r.path << ',' << r.label << ',' << format_double(r.timestamp) << ',' << r.bbox2.u_min
        << ',' << r.bbox2.v_min << ',' << r.bbox2.u_max << ',' << r.bbox2.v_max << ','
        << format_double(r.centroid.x) << ',' << format_double(r.centroid.y) << ','
        << format_double(r.centroid.z) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, path.string() + ": write failed");
}

DatasetManifest
read_manifest(const fs::path& root)
{
  const fs::path path = root / kManifestName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string() + ": no manifest");
  DatasetManifest m;
  m.root = root;
  std::string line;
  if (!std::getline(in, line) || trim(line) != kManifestHeader) {
    throw Error(ErrorCode::MalformedManifestRow, path.string() + ": bad header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(std::string(trim(line)), ',');
    const auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedManifestRow,
                   path.string() + ":" + std::to_string(lineno) + ": " + why);
    };
    if (fields.size() != 10) throw bad("expected 10 fields");
    ManifestRow r;
    r.path = fields[0];
    r.label = fields[1];
    if (r.path.empty() || r.label.empty()) throw bad("empty path or label");
    try {
      r.timestamp = parse_double(fields[2], "timestamp");
      r.bbox2 = { static_cast<int>(parse_int(fields[3], "u0")), static_cast<int>(parse_int(fields[4], "v0")),
                  static_cast<int>(parse_int(fields[5], "u1")), static_cast<int>(parse_int(fields[6], "v1")) };
      r.centroid = { parse_double(fields[7], "cx"), parse_double(fields[8], "cy"),
                     parse_double(fields[9], "cz") };
    } catch (const Error& e) {
      throw bad(e.what());
    }
    m.rows.push_back(std::move(r));
  }
  return m;
}

std::vector<LabeledPatch>
load_dataset(const fs::path& root)
{
  const DatasetManifest m = read_manifest(root);
  std::vector<LabeledPatch> out;
  out.reserve(m.rows.size());
  for (const auto& r : m.rows) {
    const fs::path file = root / r.path;
    if (!fs::exists(file)) throw Error(ErrorCode::MissingFile, file.string() + ": listed in manifest but missing");
    out.push_back({ Patch{ read_ppm(file), r.bbox2 }, r.label });
  }
  return out;
}

ReplicaReport
build_replica(const fs::path& root, const PipelineConfig& config, std::size_t per_class,
              std::uint64_t seed)
{
  const auto& catalog = class_catalog();
  AcquisitionSession session;
  for (const auto& c : catalog) session.labels.push_back(c.label);
  session.target_count = per_class;
  session.border_fraction = config.border_fraction;
  session.root = root;

  DatasetWriter writer(root);
  ReplicaReport report;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    // twice the target in placements leaves room for skipped frames
    std::vector<SceneSpec> scenes;
    for (std::size_t v = 0; v < 2 * per_class; ++v) {
      SceneSpec spec = single_object_scene(catalog[k], mix_seed(seed, k), v);
      spec.camera = config.camera;
      scenes.push_back(std::move(spec));
    }
    SyntheticFrameSource source(std::move(scenes));
    const AcquireResult r =
      acquire_class(source, catalog[k].label, session, config.camera, config, writer);
    report.per_class[catalog[k].label] = r;
    report.total += r.stored;
  }
  return report;
}

} // namespace grp
