#include "grp/detect.hpp"
#include "grp/error.hpp"
#include "grp/synth.hpp"

#include <gtest/gtest.h>

using namespace grp;

namespace {

BaselineModel
catalog_model()
{
  std::vector<LabeledPatch> data;
  for (const auto& c : class_catalog()) data.push_back({ { Image(32, 32, c.color), { 0, 0, 32, 32 } }, c.label });
  return train_baseline(data);
}

SceneSpec
scene()
{
  SceneSpec s;
  s.name = "detect";
  s.spacing = 0.003;
  const auto& cat = class_catalog();
  s.objects = { cat[0].at({ -0.2, 0.0, 1.1 - 0.02 - 0.04 }), cat[3].at({ 0.05, 0.12, 1.0 }),
                cat[5].at({ 0.25, -0.15, 1.0 }) };
  for (auto& o : s.objects) o.centroid.z = s.table_z - 0.02 - o.half_extents().z;
  s.validate();
  return s;
}

// Forwards to another classifier, hiding its concrete type.
class Wrapped final : public Classifier {
public:
  explicit Wrapped(Classifier& inner) : inner_(inner) {}
  const std::vector<std::string>& labels() const override { return inner_.labels(); }
  int input_width() const override { return inner_.input_width(); }
  int input_height() const override { return inner_.input_height(); }
  ClassScores classify(const Patch& p) override
  {
    ++calls;
    if (fail_every > 0 && calls % fail_every == 0) throw Error(ErrorCode::Timeout, "injected");
    return inner_.classify(p);
  }
  int calls = 0;
  int fail_every = 0;

private:
  Classifier& inner_;
};

} // namespace

TEST(Detect, LabelsEveryObject)
{
  const SceneSpec s = scene();
  const SynthFrame f = synth_frame(s, 0);
  BaselineModel model = catalog_model();
  const DetectionSet d = detect(f.cloud, f.image, s.camera, PipelineConfig{}, model);
  ASSERT_EQ(d.detections.size(), 3u);
  EXPECT_EQ(d.classifier_failures, 0u);
  for (const auto& t : f.truth.objects) {
    const Detection* best = nullptr;
    for (const auto& det : d.detections)
      if (!best || distance(det.proposal.centroid, t.centroid) < distance(best->proposal.centroid, t.centroid))
        best = &det;
    EXPECT_EQ(best->label, t.label);
    EXPECT_EQ(best->label, best->scores.argmax());
  }
  EXPECT_GT(d.leaf, 0.0);
  EXPECT_GE(d.timings.classify_ms, 0.0);
}

TEST(Detect, ParallelBaselineMatchesSerialPath)
{
  const SceneSpec s = scene();
  BaselineModel model = catalog_model();
  Wrapped serial(model);
  for (std::size_t frame = 0; frame < 3; ++frame) {
    const SynthFrame f = synth_frame(s, frame);
    const DetectionSet a = detect(f.cloud, f.image, s.camera, PipelineConfig{}, model);
    const DetectionSet b = detect(f.cloud, f.image, s.camera, PipelineConfig{}, serial);
    ASSERT_EQ(a.detections.size(), b.detections.size());
    for (std::size_t k = 0; k < a.detections.size(); ++k) {
      EXPECT_EQ(a.detections[k].label, b.detections[k].label);
      EXPECT_EQ(a.detections[k].scores.probs, b.detections[k].scores.probs);
      EXPECT_EQ(a.detections[k].proposal.bbox2, b.detections[k].proposal.bbox2);
    }
  }
}

TEST(Detect, ClassifierFailureDegradesToErrorLabel)
{
  const SceneSpec s = scene();
  const SynthFrame f = synth_frame(s, 0);
  BaselineModel model = catalog_model();
  Wrapped flaky(model);
  flaky.fail_every = 2;
  const DetectionSet d = detect(f.cloud, f.image, s.camera, PipelineConfig{}, flaky);
  ASSERT_EQ(d.detections.size(), 3u);
  EXPECT_EQ(d.classifier_failures, 1u);
  EXPECT_EQ(d.detections[1].label, kErrorLabel);
  EXPECT_EQ(d.detections[1].scores.probs, ClassScores::uniform(model.labels()).probs);
  EXPECT_NE(d.detections[0].label, kErrorLabel);
}

TEST(Detect, ImageSizeMustMatchCamera)
{
  const SceneSpec s = scene();
  const PointCloud c = synth_cloud(s, 0);
  BaselineModel model = catalog_model();
  try {
    detect(c, Image(320, 240), s.camera, PipelineConfig{}, model);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImageSizeMismatch);
  }
}
