#include "cli.hpp"

#include "grp/acquisition.hpp"
#include "grp/classifier.hpp"
#include "grp/config.hpp"
#include "grp/detect.hpp"
#include "grp/error.hpp"
#include "grp/evaluation.hpp"
#include "grp/pcd_io.hpp"
#include "grp/serialize.hpp"
#include "grp/synth.hpp"
#include "grp/tcp_classifier.hpp"
#include "grp/text.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

namespace grp::cli {

namespace fs = std::filesystem;

namespace {

class Log {
public:
  Log(std::ostream& err, const bool& timestamps, const bool& quiet)
    : err_(err), timestamps_(timestamps), quiet_(quiet)
  {
  }

  void event(const std::string& name, Json fields = Json::object()) const
  {
    if (quiet_) return;
    Json j;
    if (timestamps_) j["ts"] = now();
    j["level"] = "info";
    j["event"] = name;
    for (auto& [k, v] : fields.items()) j[k] = v;
    err_ << j.dump() << '\n';
  }

private:
  static std::string now()
  {
    const auto t = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(t);
    const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char full[48];
    std::snprintf(full, sizeof full, "%s.%03dZ", buf, static_cast<int>(ms));
    return full;
  }

  std::ostream& err_;
  const bool& timestamps_;
  const bool& quiet_;
};

// Pipeline options shared by the subcommands that run the pipeline.
struct PipelineOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::pair<CLI::Option*, std::string>> mapped;
  std::map<std::string, std::string> values;
  bool no_passthrough = false;
  bool refit = false;

  void attach(CLI::App* app)
  {
    app->add_option("--config", config_path, "flat key = value config file");
    app->add_option("--set", sets, "override a config key (key=value), repeatable");
    const std::vector<std::pair<std::string, std::string>> flags{
      { "--ransac-dist", "ransac.distance" },    { "--ransac-iters", "ransac.iterations" },
      { "--ransac-min-frac", "ransac.min_fraction" }, { "--seed", "seed" },
      { "--cluster-tol", "cluster.tolerance" },  { "--cluster-min", "cluster.min_size" },
      { "--cluster-max", "cluster.max_size" },   { "--leaf", "leaf" },
      { "--alpha", "alpha" },                    { "--border", "border_fraction" },
      { "--classifier", "classifier" },
    };
    for (const auto& [flag, key] : flags) {
      mapped.emplace_back(app->add_option(flag, values[key], "config key " + key), key);
    }
    app->add_flag("--no-passthrough", no_passthrough, "disable the passthrough filter");
    app->add_flag("--ransac-refit", refit, "least-squares polish of the table plane");
  }

  PipelineConfig resolve() const
  {
    Settings merged;
    if (!config_path.empty()) overlay(merged, read_settings(config_path));
    overlay(merged, env_settings());
    Settings layer;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "--set expects key=value, got '" + s + "'");
      }
      layer[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
    }
    for (const auto& [opt, key] : mapped) {
      if (opt->count() > 0) layer[key] = values.at(key);
    }
    if (no_passthrough) layer["passthrough.enabled"] = "false";
    if (refit) layer["ransac.refit"] = "true";
    overlay(merged, layer);
    return pipeline_config(merged);
  }
};

struct ClassifierOptions {
  std::string model;
  std::string dataset;
  double temperature = kDefaultTemperature;
  int remote_input = kDefaultRemoteInput;
  double timeout_s = 2.0;

  void attach(CLI::App* app)
  {
    app->add_option("--model", model, "baseline model file (GBM1)");
    app->add_option("--dataset", dataset, "train the baseline from this dataset root instead");
    app->add_option("--temperature", temperature, "softmax temperature when training")
      ->check(CLI::PositiveNumber);
    app->add_option("--remote-input", remote_input, "patch size sent to a tcp classifier")
      ->check(CLI::Range(1, 4096));
    app->add_option("--timeout", timeout_s, "tcp classifier timeout, seconds")
      ->check(CLI::PositiveNumber);
  }

  std::unique_ptr<Classifier> make(const std::string& selector, const Log& log) const
  {
    if (selector.rfind("tcp:", 0) == 0) {
      const auto ms = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000.0));
      return std::make_unique<TcpClassifier>(Endpoint::parse(selector.substr(4)), remote_input, ms);
    }
    std::string path = model;
    if (selector.rfind("baseline:", 0) == 0) {
      path = selector.substr(9);
    } else if (selector != "baseline") {
      throw Error(ErrorCode::InvalidConfig, "unknown classifier '" + selector + "'");
    }
    if (!path.empty()) return std::make_unique<BaselineModel>(BaselineModel::load(path));
    if (!dataset.empty()) {
      auto model = train_baseline(load_dataset(dataset), temperature);
      log.event("baseline_trained", { { "labels", model.labels().size() } });
      return std::make_unique<BaselineModel>(std::move(model));
    }
    throw Error(ErrorCode::InvalidConfig,
                "the baseline classifier needs --model, --dataset or baseline:<model path>");
  }
};

void
write_text(const std::string& path, const std::string& text, std::ostream& fallback)
{
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoFailure, path + ": cannot open for writing");
  f << text;
  if (!f) throw Error(ErrorCode::IoFailure, path + ": write failed");
}

std::vector<std::string>
csv_list(const std::string& text)
{
  std::vector<std::string> out;
  for (const auto& part : split(text, ',')) {
    const auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

SceneSpec
pick_suite_scene(const std::string& which)
{
  const auto suite = standard_suite();
  for (const auto& s : suite) {
    if (s.name == which) return s;
  }
  const std::size_t n = parse_size(which, "scene");
  if (n < 1 || n > suite.size()) {
    throw Error(ErrorCode::InvalidParams, "scene must be 1.." + std::to_string(suite.size()));
  }
  return suite[n - 1];
}

SceneSpec
load_scene(const std::string& path)
{
  SceneSpec s = scene_from_settings(read_settings(path));
  s.validate();
  return s;
}

const ObjectClass&
catalog_class(const std::string& label)
{
  for (const auto& c : class_catalog()) {
    if (c.label == label) return c;
  }
  throw Error(ErrorCode::InvalidParams, "no synthetic class named '" + label + "'");
}

Json
acquire_json(const std::string& label, const AcquireResult& r)
{
  return { { "label", label },           { "stored", r.stored },
           { "skipped_empty", r.skipped_empty }, { "ambiguous", r.ambiguous },
           { "failed", r.failed },         { "stream_ended", r.stream_ended } };
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in)
{
  bool timestamps_off = false;
  bool quiet = false;
  bool timestamps = true;
  const Log log(err, timestamps, quiet);

  CLI::App app{ "Geometric region proposals and tabletop object detection", "grp" };
  app.set_version_flag("--version", std::string("grp ") + kVersion + " (config schema " +
                                      std::to_string(kConfigSchemaVersion) + ")");
  app.require_subcommand(1, 1);
  app.add_flag("--no-timestamps", timestamps_off, "omit timestamps from stderr logs");
  app.add_flag("--quiet", quiet, "no stderr logs");

  // propose
  auto* propose = app.add_subcommand("propose", "region proposals for one cloud (JSONL)");
  PipelineOptions propose_p;
  std::string propose_cloud, propose_out;
  std::size_t propose_frame = 0;
  propose_p.attach(propose);
  propose->add_option("--cloud", propose_cloud, "input PCD")->required();
  propose->add_option("--frame", propose_frame, "frame index written in the output");
  propose->add_option("--out", propose_out, "output file (default stdout)");

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "proposals plus classification (JSONL)");
  PipelineOptions detect_p;
  ClassifierOptions detect_c;
  std::string detect_cloud, detect_image, detect_out;
  std::size_t detect_frame = 0;
  detect_p.attach(detect_cmd);
  detect_c.attach(detect_cmd);
  detect_cmd->add_option("--cloud", detect_cloud, "input PCD")->required();
  detect_cmd->add_option("--image", detect_image, "input PPM")->required();
  detect_cmd->add_option("--frame", detect_frame, "frame index written in the output");
  detect_cmd->add_option("--out", detect_out, "output file (default stdout)");

  // acquire
  auto* acquire = app.add_subcommand("acquire", "collect labeled patches of single objects");
  PipelineOptions acquire_p;
  std::string acquire_label, acquire_labels, acquire_out, acquire_dir;
  std::size_t acquire_count = 1, acquire_placements = 0;
  std::uint64_t acquire_scene_seed = 4;
  bool acquire_synthetic = false, acquire_interactive = false;
  acquire_p.attach(acquire);
  acquire->add_option("--label", acquire_label, "class label of the placed object");
  acquire->add_option("--labels", acquire_labels, "comma separated labels (interactive mode)");
  acquire->add_option("--count", acquire_count, "target patches per class")->check(CLI::PositiveNumber);
  acquire->add_option("--out", acquire_out, "dataset root")->required();
  acquire->add_option("--frames-dir", acquire_dir,
                      "directory of <stem>.pcd/<stem>.ppm frames (per label subdirectory in "
                      "interactive mode)");
  acquire->add_flag("--synthetic", acquire_synthetic, "generate frames of the catalog class");
  acquire->add_option("--placements", acquire_placements,
                      "synthetic placements to try (default 2 x count)");
  acquire->add_option("--scene-seed", acquire_scene_seed, "seed for synthetic placements");
  acquire->add_flag("--interactive", acquire_interactive, "prompt before each class");

  // replica
  auto* replica = app.add_subcommand("replica", "acquire the 19-class synthetic replica dataset");
  PipelineOptions replica_p;
  std::string replica_out;
  std::size_t replica_per_class = kReplicaPerClass;
  std::uint64_t replica_seed = 4;
  replica_p.attach(replica);
  replica->add_option("--out", replica_out, "dataset root")->required();
  replica->add_option("--per-class", replica_per_class, "patches per class")->check(CLI::PositiveNumber);
  replica->add_option("--scene-seed", replica_seed, "seed for object placements");

  // train-baseline
  auto* train = app.add_subcommand("train-baseline", "fit the color-histogram baseline");
  std::string train_dataset, train_out;
  double train_temperature = kDefaultTemperature;
  train->add_option("--dataset", train_dataset, "dataset root")->required();
  train->add_option("--out", train_out, "model file")->required();
  train->add_option("--temperature", train_temperature, "softmax temperature")
    ->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "write synthetic frames (PCD, PPM, truth JSON)");
  std::string synth_spec, synth_suite_scene, synth_out;
  bool synth_bench = false;
  std::size_t synth_frames = 1, synth_start = 0;
  auto* spec_opt = synth->add_option("--spec", synth_spec, "scene config file");
  auto* scene_opt =
    synth->add_option("--scene", synth_suite_scene, "standard suite scene (1..40 or name)");
  auto* bench_flag = synth->add_flag("--bench-scene", synth_bench, "the 307,200-point bench scene");
  spec_opt->excludes(scene_opt)->excludes(bench_flag);
  scene_opt->excludes(bench_flag);
  synth->add_option("--frames", synth_frames, "frame count")->check(CLI::PositiveNumber);
  synth->add_option("--start", synth_start, "first frame index");
  synth->add_option("--out", synth_out, "output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "accuracy over generated frames, CSV summary");
  PipelineOptions eval_p;
  ClassifierOptions eval_c;
  std::string eval_suite = "standard", eval_spec, eval_scenes, eval_out, eval_log;
  std::size_t eval_frames = 100;
  eval_p.attach(eval);
  eval_c.attach(eval);
  eval->add_option("--suite", eval_suite, "scene suite")->check(CLI::IsMember({ "standard" }));
  eval->add_option("--spec", eval_spec, "evaluate one scene config instead of the suite");
  eval->add_option("--scenes", eval_scenes, "comma separated subset of suite scenes");
  eval->add_option("--frames", eval_frames, "frames per scene")->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_out, "summary CSV (default stdout)");
  eval->add_option("--log", eval_log, "per-frame JSONL log file");
  std::string eval_name;
  eval->add_option("--row-name", eval_name, "row name in the summary (default: classifier)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "per-stage timing over sequential frames");
  PipelineOptions bench_p;
  ClassifierOptions bench_c;
  std::size_t bench_frames = 100;
  std::string bench_spec, bench_out;
  bool bench_proposal_only = false;
  bench_p.attach(bench_cmd);
  bench_c.attach(bench_cmd);
  bench_cmd->add_option("--frames", bench_frames, "timed frames (>= 10)");
  bench_cmd->add_option("--spec", bench_spec, "scene config (default: the bench scene)");
  bench_cmd->add_flag("--proposal-only", bench_proposal_only, "skip classification");
  bench_cmd->add_option("--out", bench_out, "report file (default stdout)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << app.help() << e.what() << '\n';
    Json j{ { "error", true }, { "code", "Usage" }, { "message", e.what() } };
    err << j.dump() << '\n';
    return 2;
  }
  timestamps = !timestamps_off;

  try {
    if (propose->parsed()) {
      const PipelineConfig cfg = propose_p.resolve();
      PcdLoadStats stats;
      const PointCloud cloud = load_pcd(propose_cloud, &stats);
      const ProposalSet ps = propose_regions(cloud, cfg);
      std::ostringstream os;
      for (const auto& p : ps.proposals) os << to_json(p, propose_frame).dump() << '\n';
      write_text(propose_out, os.str(), out);
      log.event("propose", { { "points", cloud.size() },
                             { "dropped_nan", stats.dropped_nan },
                             { "leaf", ps.leaf },
                             { "proposals", ps.proposals.size() },
                             { "dropped_projection", ps.dropped_projection },
                             { "proposal_ms", ps.timings.proposal_total_ms() } });
    } else if (detect_cmd->parsed()) {
      const PipelineConfig cfg = detect_p.resolve();
      auto classifier = detect_c.make(cfg.classifier, log);
      const PointCloud cloud = load_pcd(detect_cloud);
      const Image image = read_ppm(detect_image);
      const DetectionSet ds = detect(cloud, image, cfg.camera, cfg, *classifier);
      std::ostringstream os;
      for (const auto& d : ds.detections) os << to_json(d, detect_frame).dump() << '\n';
      write_text(detect_out, os.str(), out);
      log.event("detect", { { "points", cloud.size() },
                            { "leaf", ds.leaf },
                            { "detections", ds.detections.size() },
                            { "classifier_failures", ds.classifier_failures },
                            { "dropped_projection", ds.dropped_projection } });
    } else if (acquire->parsed()) {
      const PipelineConfig cfg = acquire_p.resolve();
      AcquisitionSession session;
      session.target_count = acquire_count;
      session.border_fraction = cfg.border_fraction;
      session.root = acquire_out;
      if (acquire_interactive) {
        session.labels = csv_list(acquire_labels);
      } else {
        if (acquire_label.empty()) {
          throw Error(ErrorCode::InvalidParams, "--label is required without --interactive");
        }
        session.labels = { acquire_label };
      }
      session.validate();
      if (acquire_synthetic == !acquire_dir.empty()) {
        throw Error(ErrorCode::InvalidParams, "pick exactly one of --frames-dir and --synthetic");
      }
      DatasetWriter writer(acquire_out);
      for (const auto& label : session.labels) {
        if (acquire_interactive) {
          err << "place object of type '" << label << "' in the scene, then press Enter" << std::endl;
          std::string line;
          if (!std::getline(in, line)) {
            log.event("acquire_aborted", { { "label", label } });
            break;
          }
        }
        std::unique_ptr<FrameSource> source;
        if (acquire_synthetic) {
          const ObjectClass& cls = catalog_class(label);
          const std::size_t n = acquire_placements > 0 ? acquire_placements : 2 * acquire_count;
          std::vector<SceneSpec> scenes;
          for (std::size_t v = 0; v < n; ++v) {
            SceneSpec s = single_object_scene(cls, acquire_scene_seed, v);
            s.camera = cfg.camera;
            scenes.push_back(std::move(s));
          }
          source = std::make_unique<SyntheticFrameSource>(std::move(scenes));
        } else {
          const fs::path dir = acquire_interactive ? fs::path(acquire_dir) / label : fs::path(acquire_dir);
          source = std::make_unique<DirectoryFrameSource>(dir);
        }
        const AcquireResult r = acquire_class(*source, label, session, cfg.camera, cfg, writer);
        out << acquire_json(label, r).dump() << '\n';
        log.event("acquire", acquire_json(label, r));
      }
      writer.flush();
    } else if (replica->parsed()) {
      const PipelineConfig cfg = replica_p.resolve();
      const ReplicaReport rep = build_replica(replica_out, cfg, replica_per_class, replica_seed);
      for (const auto& [label, r] : rep.per_class) out << acquire_json(label, r).dump() << '\n';
      log.event("replica", { { "total", rep.total } });
    } else if (train->parsed()) {
      const auto data = load_dataset(train_dataset);
      const BaselineModel model = train_baseline(data, train_temperature);
      model.save(train_out);
      Json j{ { "examples", data.size() }, { "labels", model.labels() },
              { "temperature", model.temperature() } };
      out << j.dump() << '\n';
    } else if (synth->parsed()) {
      SceneSpec spec;
      if (!synth_spec.empty()) {
        spec = load_scene(synth_spec);
      } else if (!synth_suite_scene.empty()) {
        spec = pick_suite_scene(synth_suite_scene);
      } else if (synth_bench) {
        spec = bench_scene();
      } else {
        throw Error(ErrorCode::InvalidParams, "one of --spec, --scene, --bench-scene is required");
      }
      const fs::path dir = synth_out;
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::IoFailure, dir.string() + ": " + ec.message());
      write_text((dir / "scene.cfg").string(), format_settings(scene_settings(spec)), out);
      for (std::size_t f = synth_start; f < synth_start + synth_frames; ++f) {
        const SynthFrame frame = synth_frame(spec, f);
        char stem[32];
        std::snprintf(stem, sizeof stem, "frame_%06zu", f);
        save_pcd(frame.cloud, dir / (std::string(stem) + ".pcd"));
        write_ppm(frame.image, dir / (std::string(stem) + ".ppm"));
        write_text((dir / (std::string(stem) + ".json")).string(),
                   to_json(frame.truth, f).dump() + "\n", out);
      }
      log.event("synth", { { "scene", spec.name }, { "frames", synth_frames } });
    } else if (eval->parsed()) {
      const PipelineConfig cfg = eval_p.resolve();
      auto classifier = eval_c.make(cfg.classifier, log);
      std::vector<SceneSpec> scenes;
      if (!eval_spec.empty()) {
        scenes.push_back(load_scene(eval_spec));
      } else if (!eval_scenes.empty()) {
        for (const auto& s : csv_list(eval_scenes)) scenes.push_back(pick_suite_scene(s));
      } else {
        scenes = standard_suite();
      }
      std::ofstream log_file;
      if (!eval_log.empty()) {
        log_file.open(eval_log, std::ios::binary | std::ios::trunc);
        if (!log_file) throw Error(ErrorCode::IoFailure, eval_log + ": cannot open for writing");
      }
      std::vector<SceneEvaluation> results;
      for (auto& spec : scenes) {
        spec.camera = cfg.camera;
        results.push_back(evaluate(spec, eval_frames, cfg, *classifier,
                                   eval_log.empty() ? nullptr : &log_file));
        const auto& r = results.back();
        log.event("scene", { { "scene", r.scene },
                             { "accuracy", r.accuracy },
                             { "exact_frames", r.exact_frames },
                             { "failed_frames", r.failed_frames } });
      }
      const std::string row = eval_name.empty() ? cfg.classifier : eval_name;
      write_text(eval_out, summary_csv(row, results), out);
    } else if (bench_cmd->parsed()) {
      const PipelineConfig cfg = bench_p.resolve();
      std::unique_ptr<Classifier> classifier;
      if (!bench_proposal_only) classifier = bench_c.make(cfg.classifier, log);
      SceneSpec spec = bench_spec.empty() ? bench_scene() : load_scene(bench_spec);
      spec.camera = cfg.camera;
      const BenchReport r = bench(spec, bench_frames, cfg, classifier.get());
      write_text(bench_out, to_json(r).dump(2) + "\n", out);
    }
  } catch (const std::exception& e) {
    err << error_json(e).dump() << '\n';
    return 1;
  }
  return 0;
}

} // namespace grp::cli
