#pragma once

#include "grp/classifier.hpp"
#include "grp/proposal.hpp"
#include "grp/synth.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace grp {

inline constexpr const char* kManifestHeader = "path,label,timestamp,u0,v0,u1,v1,cx,cy,cz";
inline constexpr const char* kManifestName = "manifest.csv";

struct ManifestRow {
  std::string path; // relative to the dataset root
  std::string label;
  double timestamp = 0.0;
  BBox2 bbox2;
  Point3 centroid;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestRow> rows;
};

/// Rows that came out of one acquisition run.
struct AcquisitionSession {
  std::vector<std::string> labels;
  std::size_t target_count = 1; // per class
  double border_fraction = 0.4;
  std::filesystem::path root;

  void validate() const;
};

struct Frame {
  PointCloud cloud;
  Image image;
};

class FrameSource {
public:
  virtual ~FrameSource() = default;
  /// Next frame, or nullopt once the stream is exhausted.
  virtual std::optional<Frame> next() = 0;
};

/// Frames stored as <stem>.pcd + <stem>.ppm pairs, visited in stem order.
/// A .pcd without its .ppm is a MissingFile error.
class DirectoryFrameSource final : public FrameSource {
public:
  explicit DirectoryFrameSource(const std::filesystem::path& dir);
  std::optional<Frame> next() override;
  std::size_t size() const noexcept { return stems_.size(); }

private:
  std::filesystem::path dir_;
  std::vector<std::string> stems_;
  std::size_t pos_ = 0;
};

/// Generated frames: `frames_per_scene` consecutive frames of each scene.
class SyntheticFrameSource final : public FrameSource {
public:
  explicit SyntheticFrameSource(std::vector<SceneSpec> scenes, std::size_t frames_per_scene = 1);
  std::optional<Frame> next() override;

private:
  std::vector<SceneSpec> scenes_;
  std::size_t frames_per_scene_;
  std::size_t scene_ = 0;
  std::size_t frame_ = 0;
};

/// Appends patches under <root>/<label>/<index>.ppm and keeps the manifest.
/// An existing manifest in `root` is loaded and extended.
class DatasetWriter {
public:
  explicit DatasetWriter(std::filesystem::path root);

  const ManifestRow& append(const std::string& label, const Patch& patch, double timestamp,
                            const Point3& centroid);
  std::size_t count(const std::string& label) const;
  const DatasetManifest& manifest() const noexcept { return manifest_; }
  void flush() const;

private:
  DatasetManifest manifest_;
  std::map<std::string, std::size_t> counts_;
};

struct AcquireResult {
  std::size_t stored = 0;
  std::size_t skipped_empty = 0; // no proposal
  std::size_t ambiguous = 0;     // two or more proposals
  std::size_t failed = 0;        // pipeline error on the frame
  bool stream_ended = false;     // target not reached
};

/// Runs the proposal pipeline on each frame and stores the patch of frames
/// with exactly one proposal until the label holds session.target_count
/// examples. The config border fraction must equal the session's.
AcquireResult acquire_class(FrameSource& frames, const std::string& label,
                            const AcquisitionSession& session, const CameraModel& camera,
                            const PipelineConfig& config, DatasetWriter& writer);

void write_manifest(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& root);

/// Patches as stored (unscaled) with their labels, in manifest order.
std::vector<LabeledPatch> load_dataset(const std::filesystem::path& root);

inline constexpr std::size_t kReplicaPerClass = 139;

struct ReplicaReport {
  std::map<std::string, AcquireResult> per_class;
  std::size_t total = 0;
};

/// Acquires the synthetic replica: every catalog class on its own table,
/// one frame per random placement, until `per_class` patches are stored.
ReplicaReport build_replica(const std::filesystem::path& root, const PipelineConfig& config,
                            std::size_t per_class = kReplicaPerClass, std::uint64_t seed = 4);

} // namespace grp
