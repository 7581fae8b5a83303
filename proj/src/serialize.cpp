#include "grp/serialize.hpp"

#include "grp/error.hpp"

namespace grp {

Json
to_json(const Point3& p)
{
  return Json::array({ p.x, p.y, p.z });
}

Json
to_json(const BBox2& b)
{
  return Json::array({ b.u_min, b.v_min, b.u_max, b.v_max });
}

Json
to_json(const Proposal& p, std::size_t frame)
{
  Json j;
  j["frame"] = frame;
  j["bbox3"] = { { "min", to_json(p.bbox3.min) }, { "max", to_json(p.bbox3.max) } };
  j["centroid"] = to_json(p.centroid);
  j["bbox2"] = to_json(p.bbox2);
  j["cluster_size"] = p.cluster_size;
  return j;
}

Json
to_json(const Detection& d, std::size_t frame)
{
  Json j = to_json(d.proposal, frame);
  j["label"] = d.label;
  Json probs = Json::object();
  for (const auto& [label, p] : d.scores.probs) probs[label] = p;
  j["scores"] = std::move(probs);
  return j;
}

Json
to_json(const GroundTruth& truth, std::size_t frame)
{
  Json objects = Json::array();
  for (const auto& o : truth.objects) {
    objects.push_back({ { "label", o.label },
                        { "centroid", to_json(o.centroid) },
                        { "extents", { { "min", to_json(o.extents.min) },
                                       { "max", to_json(o.extents.max) } } },
                        { "bbox2", to_json(o.bbox2) } });
  }
  const auto axis = [](const AxisBounds& a) {
    return Json::array({ a.min ? Json(*a.min) : Json(), a.max ? Json(*a.max) : Json() });
  };
  Json j;
  j["frame"] = frame;
  j["camera_offset"] = to_json(truth.camera_offset);
  j["table_bounds"] = { { "x", axis(truth.table_bounds.x) },
                        { "y", axis(truth.table_bounds.y) },
                        { "z", axis(truth.table_bounds.z) } };
  j["objects"] = std::move(objects);
  return j;
}

Json
to_json(const FrameResult& r, const std::string& scene)
{
  Json objects = Json::array();
  for (const auto& o : r.objects) {
    Json jo;
    jo["truth"] = o.truth_label;
    jo["predicted"] = o.detection ? Json(o.predicted) : Json();
    jo["distance"] = o.detection ? Json(o.distance) : Json();
    jo["correct"] = o.correct;
    objects.push_back(std::move(jo));
  }
  Json j;
  j["scene"] = scene;
  j["frame"] = r.frame;
  j["accuracy"] = r.accuracy;
  j["detections"] = r.detections;
  j["objects"] = std::move(objects);
  if (r.error) j["error"] = *r.error;
  return j;
}

Json
to_json(const StageStats& s)
{
  return { { "mean_ms", s.mean }, { "median_ms", s.median }, { "p95_ms", s.p95 } };
}

Json
to_json(const BenchReport& r)
{
  Json j;
  j["frames"] = r.frames;
  j["warmup"] = r.warmup;
  j["points"] = r.points;
  j["leaf"] = r.leaf;
  j["downsample"] = to_json(r.downsample);
  j["plane"] = to_json(r.plane);
  j["cluster"] = to_json(r.cluster);
  j["project"] = to_json(r.project);
  j["classify"] = to_json(r.classify);
  j["proposal"] = to_json(r.proposal);
  j["end_to_end"] = to_json(r.end_to_end);
  j["mean_hz"] = r.mean_hz;
  j["proposal_hz"] = r.proposal_hz;
  return j;
}

Json
error_json(const std::exception& e)
{
  Json j;
  j["error"] = true;
  if (const auto* ge = dynamic_cast<const Error*>(&e)) {
    j["code"] = std::string(to_string(ge->code()));
  } else {
    j["code"] = "Internal";
  }
  j["message"] = e.what();
  return j;
}

} // namespace grp
