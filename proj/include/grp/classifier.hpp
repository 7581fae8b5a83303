#pragma once

#include "grp/image.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace grp {

/// Label -> probability, iterated in lexicographic label order.
struct ClassScores {
  std::map<std::string, double> probs;

  /// Most probable label; the lexicographically smallest wins ties.
  std::string argmax() const;

  /// Throws ProtocolError unless the keys equal `labels`, every probability
  /// is >= 0 and they sum to 1 within `tolerance`.
  void validate(const std::vector<std::string>& labels, double tolerance = 1e-6) const;

  static ClassScores uniform(const std::vector<std::string>& labels);
};

/// Anything that can score a patch against a fixed label set.
class Classifier {
public:
  virtual ~Classifier() = default;

  virtual const std::vector<std::string>& labels() const = 0;
  virtual int input_width() const = 0;
  virtual int input_height() const = 0;

  /// `patch` must already be scaled to input_width() x input_height().
  virtual ClassScores classify(const Patch& patch) = 0;
};

inline constexpr int kHistogramBins = 64; // 4 x 4 x 4 RGB
inline constexpr int kBaselineInput = 64;
inline constexpr double kDefaultTemperature = 0.05;

using ColorHistogram = std::array<double, kHistogramBins>;

/// Bin of an 8-bit color: (r / 64) * 16 + (g / 64) * 4 + b / 64.
constexpr int histogram_bin(Rgb c) noexcept {
  return (c.r >> 6) * 16 + (c.g >> 6) * 4 + (c.b >> 6);
}

/// L1-normalized 4x4x4 color histogram.
ColorHistogram color_histogram(const Image& image);

/// Nearest-centroid classifier over color histograms. Scores are
/// softmax(-||h - centroid_k|| / temperature).
class BaselineModel final : public Classifier {
public:
  BaselineModel(std::vector<std::string> labels, std::vector<ColorHistogram> centroids,
                double temperature);

  const std::vector<std::string>& labels() const override { return labels_; }
  int input_width() const override { return kBaselineInput; }
  int input_height() const override { return kBaselineInput; }
  ClassScores classify(const Patch& patch) override;

  /// Same scores as classify(); const and therefore safe to call concurrently.
  ClassScores score(const Patch& patch) const;

  const std::vector<ColorHistogram>& centroids() const noexcept { return centroids_; }
  double temperature() const noexcept { return temperature_; }

  void save(const std::filesystem::path& path) const;
  static BaselineModel load(const std::filesystem::path& path);

  friend bool operator==(const BaselineModel& a, const BaselineModel& b) {
    return a.labels_ == b.labels_ && a.centroids_ == b.centroids_ &&
           a.temperature_ == b.temperature_;
  }

private:
  std::vector<std::string> labels_;
  std::vector<ColorHistogram> centroids_;
  double temperature_;
};

struct LabeledPatch {
  Patch patch;
  std::string label;
};

/// Per-class mean of the members' histograms, each member first scaled to
/// the 64x64 input. Labels come out sorted. When `labels` is non-empty it
/// fixes the label set and every entry needs at least one example.
BaselineModel train_baseline(const std::vector<LabeledPatch>& dataset,
                             double temperature = kDefaultTemperature,
                             const std::vector<std::string>& labels = {});

/// Scales to the classifier input, classifies, and checks the result.
ClassScores classify_patch(Classifier& classifier, const Patch& patch);

} // namespace grp
