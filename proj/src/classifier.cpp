#include "grp/classifier.hpp"

#include "grp/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

namespace grp {

namespace {

constexpr char kModelMagic[4] = { 'G', 'B', 'M', '1' };

void
put_u32(std::ostream& out, std::uint32_t v)
{
  unsigned char b[4];
  for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void
put_f64(std::ostream& out, double v)
{
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t
get_u32(std::istream& in)
{
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorCode::MalformedModel, "truncated model file");
  }
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= std::uint32_t{ b[k] } << (8 * k);
  return v;
}

double
get_f64(std::istream& in)
{
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw Error(ErrorCode::MalformedModel, "truncated model file");
  }
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= std::uint64_t{ b[k] } << (8 * k);
  return std::bit_cast<double>(v);
}

} // namespace

std::string
ClassScores::argmax() const
{
  const std::string* best = nullptr;
  double best_p = -1.0;
  for (const auto& [label, p] : probs) {
    if (p > best_p) { // strict: earlier (smaller) label keeps ties
      best = &label;
      best_p = p;
    }
  }
  return best ? *best : std::string{};
}

void
ClassScores::validate(const std::vector<std::string>& labels, double tolerance) const
{
  if (probs.size() != labels.size()) {
    throw Error(ErrorCode::ProtocolError, "score label set does not match the model");
  }
  double sum = 0.0;
  for (const auto& label : labels) {
    const auto it = probs.find(label);
    if (it == probs.end()) {
      throw Error(ErrorCode::ProtocolError, "missing score for label '" + label + "'");
    }
    if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
      throw Error(ErrorCode::ProtocolError, "invalid probability for '" + label + "'");
    }
    sum += it->second;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw Error(ErrorCode::ProtocolError, "probabilities sum to " + std::to_string(sum));
  }
}

ClassScores
ClassScores::uniform(const std::vector<std::string>& labels)
{
  ClassScores s;
  for (const auto& l : labels) s.probs[l] = 1.0 / static_cast<double>(labels.size());
  return s;
}

ColorHistogram
color_histogram(const Image& image)
{
  ColorHistogram h{};
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  if (n == 0) return h;
  std::array<std::uint64_t, kHistogramBins> counts{};
  for (std::size_t k = 0; k < n; ++k) {
    const Rgb c{ image.pixels[3 * k], image.pixels[3 * k + 1], image.pixels[3 * k + 2] };
    ++counts[histogram_bin(c)];
  }
  for (int b = 0; b < kHistogramBins; ++b) {
    h[b] = static_cast<double>(counts[b]) / static_cast<double>(n);
  }
  return h;
}

BaselineModel::BaselineModel(std::vector<std::string> labels,
                             std::vector<ColorHistogram> centroids, double temperature)
  : labels_(std::move(labels))
  , centroids_(std::move(centroids))
  , temperature_(temperature)
{
  if (labels_.size() != centroids_.size()) {
    throw Error(ErrorCode::MalformedModel, "label and centroid counts differ");
  }
  if (labels_.size() < 2) {
    throw Error(ErrorCode::SingleClass, "a classifier needs at least two labels");
  }
  if (!(temperature_ > 0.0) || !std::isfinite(temperature_)) {
    throw Error(ErrorCode::MalformedModel, "temperature must be > 0");
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw Error(ErrorCode::MalformedModel, "duplicate labels");
  }
}

ClassScores
BaselineModel::score(const Patch& patch) const
{
  if (patch.image.width != kBaselineInput || patch.image.height != kBaselineInput) {
    throw Error(ErrorCode::ShapeMismatch, "baseline expects a 64x64 patch");
  }
  const ColorHistogram h = color_histogram(patch.image);
  std::vector<double> logits(labels_.size());
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    double d2 = 0.0;
    for (int b = 0; b < kHistogramBins; ++b) {
      const double d = h[b] - centroids_[k][b];
      d2 += d * d;
    }
    logits[k] = -std::sqrt(d2) / temperature_;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - top);
    z += l;
  }
  ClassScores s;
  for (std::size_t k = 0; k < labels_.size(); ++k) s.probs[labels_[k]] = logits[k] / z;
  return s;
}

ClassScores
BaselineModel::classify(const Patch& patch)
{
  return score(patch);
}

void
BaselineModel::save(const std::filesystem::path& path) const
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(kModelMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(labels_.size()));
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    put_u32(out, static_cast<std::uint32_t>(labels_[k].size()));
    out.write(labels_[k].data(), static_cast<std::streamsize>(labels_[k].size()));
    for (const double v : centroids_[k]) put_f64(out, v);
  }
  put_f64(out, temperature_);
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

BaselineModel
BaselineModel::load(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0) {
    throw Error(ErrorCode::MalformedModel, path.string() + ": missing GBM1 header");
  }
  const std::uint32_t count = get_u32(in);
  if (count > 1u << 16) throw Error(ErrorCode::MalformedModel, "implausible label count");
  std::vector<std::string> labels(count);
  std::vector<ColorHistogram> centroids(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t len = get_u32(in);
    if (len > 4096) throw Error(ErrorCode::MalformedModel, "implausible label length");
    labels[k].resize(len);
    if (!in.read(labels[k].data(), len)) {
      throw Error(ErrorCode::MalformedModel, "truncated model file");
    }
    for (auto& v : centroids[k]) v = get_f64(in);
  }
  const double temperature = get_f64(in);
  return BaselineModel(std::move(labels), std::move(centroids), temperature);
}

BaselineModel
train_baseline(const std::vector<LabeledPatch>& dataset, double temperature,
               const std::vector<std::string>& labels)
{
  std::map<std::string, std::pair<ColorHistogram, std::size_t>> sums;
  for (const auto& l : labels) sums[l] = { ColorHistogram{}, 0 };
  for (const auto& ex : dataset) {
    if (!labels.empty() && !sums.contains(ex.label)) {
      throw Error(ErrorCode::InvalidParams, "example label '" + ex.label + "' not in label set");
    }
    const Patch scaled = scale_patch(ex.patch, kBaselineInput, kBaselineInput);
    const ColorHistogram h = color_histogram(scaled.image);
    auto& [acc, n] = sums[ex.label];
    for (int b = 0; b < kHistogramBins; ++b) acc[b] += h[b];
    ++n;
  }
  if (sums.size() < 2) {
    throw Error(ErrorCode::SingleClass, "training needs at least two labels");
  }
  std::vector<std::string> out_labels;
  std::vector<ColorHistogram> centroids;
  for (auto& [label, entry] : sums) {
    auto& [acc, n] = entry;
    if (n == 0) throw Error(ErrorCode::EmptyClass, "label '" + label + "' has no examples");
    for (auto& v : acc) v /= static_cast<double>(n);
    out_labels.push_back(label);
    centroids.push_back(acc);
  }
  return BaselineModel(std::move(out_labels), std::move(centroids), temperature);
}

ClassScores
classify_patch(Classifier& classifier, const Patch& patch)
{
  const Patch scaled = (patch.image.width == classifier.input_width() &&
                        patch.image.height == classifier.input_height())
                         ? patch
                         : scale_patch(patch, classifier.input_width(), classifier.input_height());
  ClassScores s = classifier.classify(scaled);
  s.validate(classifier.labels());
  return s;
}

} // namespace grp
