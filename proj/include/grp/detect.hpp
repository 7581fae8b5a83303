#pragma once

#include "grp/classifier.hpp"
#include "grp/proposal.hpp"

#include <string>
#include <vector>

namespace grp {

/// Label attached to a detection whose classifier call failed.
inline constexpr const char* kErrorLabel = "error";

struct Detection {
  Proposal proposal;
  std::string label;
  ClassScores scores;
};

struct DetectionSet {
  std::vector<Detection> detections;
  std::size_t dropped_projection = 0;
  std::size_t classifier_failures = 0;
  double leaf = 0.0;
  StageTimings timings;
};

/// Proposals, then one classification per proposal patch, in proposal
/// order. A failing classifier call degrades that detection to label
/// "error" with uniform scores instead of aborting the frame.
DetectionSet detect(const PointCloud& cloud, const Image& image, const CameraModel& camera,
                    const PipelineConfig& config, Classifier& classifier);

} // namespace grp
