#include "grp/evaluation.hpp"

#include "grp/error.hpp"
#include "grp/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <tuple>

namespace grp {

FrameResult
match_detections(const std::vector<Detection>& detections, const GroundTruth& truth, double radius)
{
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidParams, "match radius must be > 0");
  FrameResult out;
  out.detections = detections.size();
  out.objects.resize(truth.objects.size());
  for (std::size_t t = 0; t < truth.objects.size(); ++t) {
    out.objects[t].truth_label = truth.objects[t].label;
  }

  struct Pair {
    double d;
    std::size_t t;
    std::size_t k;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < truth.objects.size(); ++t) {
    for (std::size_t k = 0; k < detections.size(); ++k) {
      const double d = distance(truth.objects[t].centroid, detections[k].proposal.centroid);
      if (d <= radius) pairs.push_back({ d, t, k });
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    return std::tie(a.d, truth.objects[a.t].label, a.t, a.k) <
           std::tie(b.d, truth.objects[b.t].label, b.t, b.k);
  });
  std::vector<char> used(detections.size(), 0);
  for (const Pair& p : pairs) {
    ObjectOutcome& o = out.objects[p.t];
    if (o.detection || used[p.k]) continue;
    used[p.k] = 1;
    o.detection = p.k;
    o.distance = p.d;
    o.predicted = detections[p.k].label;
    o.correct = o.predicted == o.truth_label;
  }

  if (truth.objects.empty()) {
    out.accuracy = 1.0;
  } else {
    const auto correct = std::count_if(out.objects.begin(), out.objects.end(),
                                       [](const ObjectOutcome& o) { return o.correct; });
    out.accuracy = static_cast<double>(correct) / static_cast<double>(truth.objects.size());
  }
  return out;
}

PipelineConfig
scene_config(const PipelineConfig& config, const GroundTruth& truth, double leaf)
{
  PipelineConfig c = config;
  c.alpha.reset();
  c.leaf = leaf;
  if (c.passthrough_enabled) c.passthrough = truth.table_bounds;
  return c;
}

SceneEvaluation
evaluate(const SceneSpec& spec, std::size_t n_frames, const PipelineConfig& config,
         Classifier& classifier, std::ostream* log)
{
  if (n_frames < 1) throw Error(ErrorCode::InvalidParams, "n_frames must be >= 1");
  config.validate();
  spec.validate();

  SceneEvaluation out;
  out.scene = spec.name;
  double sum = 0.0;
  std::optional<double> leaf = config.leaf;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const SynthFrame frame = synth_frame(spec, f);
    FrameResult r;
    try {
      if (!leaf) leaf = config.resolve_leaf(frame.cloud);
      const PipelineConfig c = scene_config(config, frame.truth, *leaf);
      const DetectionSet ds = detect(frame.cloud, frame.image, c.camera, c, classifier);
      r = match_detections(ds.detections, frame.truth);
    } catch (const std::exception& e) {
      r = FrameResult{};
      r.accuracy = 0.0;
      r.error = e.what();
      for (const auto& t : frame.truth.objects) r.objects.push_back({ t.label, {}, {}, 0.0, false });
      ++out.failed_frames;
    }
    r.frame = f;
    if (!r.error && r.detections == frame.truth.objects.size()) ++out.exact_frames;
    for (const auto& o : r.objects) {
      ++out.objects_total;
      if (o.detection) {
        out.max_error = std::max(out.max_error, o.distance);
        if (o.distance <= kLocalizationBound) ++out.objects_localized;
      }
    }
    sum += r.accuracy;
    if (log != nullptr) *log << to_json(r, spec.name).dump() << '\n';
    out.frames.push_back(std::move(r));
  }
  out.accuracy = sum / static_cast<double>(n_frames);
  out.leaf = leaf.value_or(0.0);
  return out;
}

std::string
summary_csv(const std::string& classifier_name, const std::vector<SceneEvaluation>& scenes)
{
  std::string header = "classifier";
  std::string row = classifier_name;
  char buf[32];
  double sum = 0.0;
  for (const auto& s : scenes) {
    header += "," + s.scene;
    std::snprintf(buf, sizeof buf, ",%.4f", s.accuracy);
    row += buf;
    sum += s.accuracy;
  }
  header += ",Overall";
  std::snprintf(buf, sizeof buf, ",%.4f",
                scenes.empty() ? 0.0 : sum / static_cast<double>(scenes.size()));
  row += buf;
  return header + "\n" + row + "\n";
}

StageStats
stage_stats(std::vector<double> samples)
{
  StageStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  s.median = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  // nearest rank
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95 = samples[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

BenchReport
bench(const SceneSpec& spec, std::size_t n_frames, const PipelineConfig& config,
      Classifier* classifier)
{
  if (n_frames < 10) throw Error(ErrorCode::InvalidParams, "bench needs at least 10 frames");
  config.validate();
  spec.validate();

  BenchReport out;
  out.frames = n_frames;
  out.warmup = kBenchWarmup;
  std::vector<double> ds, pl, cl, pr, cf, prop, e2e;
  std::optional<double> leaf = config.leaf;
  using clock = std::chrono::steady_clock;

  for (std::size_t f = 0; f < kBenchWarmup + n_frames; ++f) {
    SynthFrame frame;
    frame.cloud = synth_cloud(spec, f);
    frame.truth = ground_truth(spec, f);
    if (classifier != nullptr) frame.image = render_image(spec, f);
    if (!leaf) leaf = config.resolve_leaf(frame.cloud);
    const PipelineConfig c = scene_config(config, frame.truth, *leaf);

    StageTimings t;
    const auto t0 = clock::now();
    if (classifier != nullptr) {
      t = detect(frame.cloud, frame.image, c.camera, c, *classifier).timings;
    } else {
      t = propose_regions(frame.cloud, c).timings;
    }
    const double total = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    out.points = frame.cloud.size();
    if (f < kBenchWarmup) continue;
    ds.push_back(t.downsample_ms);
    pl.push_back(t.plane_ms);
    cl.push_back(t.cluster_ms);
    pr.push_back(t.project_ms);
    cf.push_back(t.classify_ms);
    prop.push_back(t.proposal_total_ms());
    e2e.push_back(total);
  }
  out.leaf = leaf.value_or(0.0);
  const double total_e2e = std::accumulate(e2e.begin(), e2e.end(), 0.0);
  const double total_prop = std::accumulate(prop.begin(), prop.end(), 0.0);
  out.mean_hz = total_e2e > 0.0 ? 1000.0 * static_cast<double>(n_frames) / total_e2e : 0.0;
  out.proposal_hz = total_prop > 0.0 ? 1000.0 * static_cast<double>(n_frames) / total_prop : 0.0;
  out.downsample = stage_stats(std::move(ds));
  out.plane = stage_stats(std::move(pl));
  out.cluster = stage_stats(std::move(cl));
  out.project = stage_stats(std::move(pr));
  out.classify = stage_stats(std::move(cf));
  out.proposal = stage_stats(std::move(prop));
  out.end_to_end = stage_stats(std::move(e2e));
  return out;
}

} // namespace grp
