#pragma once

#include "grp/detect.hpp"
#include "grp/synth.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace grp {

inline constexpr double kMatchRadius = 0.05;
inline constexpr double kLocalizationBound = 0.006;

struct ObjectOutcome {
  std::string truth_label;
  std::optional<std::size_t> detection; // index of the matched detection
  std::string predicted;                // empty when unmatched
  double distance = 0.0;                // centroid error of the match
  bool correct = false;
};

struct FrameResult {
  std::size_t frame = 0;
  std::vector<ObjectOutcome> objects;
  std::size_t detections = 0;
  double accuracy = 0.0;
  std::optional<std::string> error; // pipeline failure, scored as 0
};

/// Greedy nearest-centroid matching: all (truth, detection) pairs within
/// `radius` are taken in order of (distance, truth label, detection index),
/// each side used at most once. Frames without truth objects score 1.
FrameResult match_detections(const std::vector<Detection>& detections, const GroundTruth& truth,
                             double radius = kMatchRadius);

struct SceneEvaluation {
  std::string scene;
  std::vector<FrameResult> frames;
  double accuracy = 0.0;             // mean frame accuracy
  std::size_t failed_frames = 0;     // pipeline errors
  std::size_t exact_frames = 0;      // detections == truth objects
  std::size_t objects_total = 0;
  std::size_t objects_localized = 0; // matched within kLocalizationBound
  double max_error = 0.0;            // over matched objects
  double leaf = 0.0;
};

/// Runs detect on `n_frames` generated frames of `spec`. An alpha config is
/// calibrated once on frame 0 and the resulting leaf reused. With
/// passthrough enabled the bounds come from the frame's table extents.
/// When `log` is set one JSON line per frame is written to it.
SceneEvaluation evaluate(const SceneSpec& spec, std::size_t n_frames, const PipelineConfig& config,
                         Classifier& classifier, std::ostream* log = nullptr);

/// Config actually used for a frame of `spec`: fixed leaf, table bounds.
PipelineConfig scene_config(const PipelineConfig& config, const GroundTruth& truth, double leaf);

/// Summary table: header "classifier,<scene names...>,Overall" and one row.
std::string summary_csv(const std::string& classifier_name,
                        const std::vector<SceneEvaluation>& scenes);

struct StageStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

StageStats stage_stats(std::vector<double> samples_ms);

struct BenchReport {
  std::size_t frames = 0;
  std::size_t warmup = 0;
  std::size_t points = 0; // cloud size of the last frame
  double leaf = 0.0;
  StageStats downsample;
  StageStats plane;
  StageStats cluster;
  StageStats project;
  StageStats classify;
  StageStats proposal;   // sum of the four proposal stages
  StageStats end_to_end; // wall time of the whole call
  double mean_hz = 0.0;          // frames / total end-to-end seconds
  double proposal_hz = 0.0;      // frames / total proposal seconds
};

inline constexpr std::size_t kBenchWarmup = 3;

/// Times `n_frames` sequential frames after kBenchWarmup untimed ones. Frame
/// synthesis is outside the timed region. With no classifier only the
/// proposal stage runs.
BenchReport bench(const SceneSpec& spec, std::size_t n_frames, const PipelineConfig& config,
                  Classifier* classifier);

} // namespace grp
