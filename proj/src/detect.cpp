#include "grp/detect.hpp"

#include "grp/error.hpp"

#include <chrono>
#include <optional>

namespace grp {

DetectionSet
detect(const PointCloud& cloud, const Image& image, const CameraModel& camera,
       const PipelineConfig& config, Classifier& classifier)
{
  if (image.width != camera.width || image.height != camera.height) {
    throw Error(ErrorCode::ImageSizeMismatch, "image size differs from the camera model");
  }
  ProposalSet proposals = propose_regions(cloud, camera, config);

  DetectionSet out;
  out.dropped_projection = proposals.dropped_projection;
  out.leaf = proposals.leaf;
  out.timings = proposals.timings;

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = proposals.proposals.size();
  std::vector<std::optional<ClassScores>> scores(n);

  const auto* baseline = dynamic_cast<const BaselineModel*>(&classifier);
  if (baseline != nullptr) {
    // score() is const, so patches can be classified concurrently
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
      const Patch patch = extract_patch(image, proposals.proposals[k].bbox2);
      try {
        ClassScores s = baseline->score(scale_patch(patch, kBaselineInput, kBaselineInput));
        s.validate(baseline->labels());
        scores[k] = std::move(s);
      } catch (const Error&) {
      }
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const Patch patch = extract_patch(image, proposals.proposals[k].bbox2);
      try {
        scores[k] = classify_patch(classifier, patch);
      } catch (const Error&) {
      }
    }
  }

  out.detections.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Detection d;
    d.proposal = proposals.proposals[k];
    if (scores[k]) {
      d.scores = std::move(*scores[k]);
      d.label = d.scores.argmax();
    } else {
      d.scores = ClassScores::uniform(classifier.labels());
      d.label = kErrorLabel;
      ++out.classifier_failures;
    }
    out.detections.push_back(std::move(d));
  }
  out.timings.classify_ms =
    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

} // namespace grp
