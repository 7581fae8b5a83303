#pragma once

#include "grp/detect.hpp"
#include "grp/evaluation.hpp"
#include "grp/synth.hpp"

#include <json.hpp>

namespace grp {

using Json = nlohmann::ordered_json;

Json to_json(const Point3& p);
Json to_json(const BBox2& b);
Json to_json(const Proposal& p, std::size_t frame);
Json to_json(const Detection& d, std::size_t frame);
Json to_json(const GroundTruth& truth, std::size_t frame);
Json to_json(const FrameResult& r, const std::string& scene);
Json to_json(const StageStats& s);
Json to_json(const BenchReport& r);

/// Single-line error object written on runtime failures.
Json error_json(const std::exception& e);

} // namespace grp
