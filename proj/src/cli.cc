#include "bimsynth/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "bimsynth/align.h"
#include "bimsynth/baseline.h"
#include "bimsynth/camera.h"
#include "bimsynth/dataset.h"
#include "bimsynth/error.h"
#include "bimsynth/mesh_blend.h"
#include "bimsynth/parallel.h"
#include "bimsynth/render.h"
#include "bimsynth/scene.h"
#include "bimsynth/seg_eval.h"
#include "text_io.h"

namespace bimsynth {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

fs::path fixture_dir() { return fs::path(BIMSYNTH_FIXTURE_DIR); }

namespace {

constexpr const char* kSummaryFile = "run_summary.json";

void write_summary(const fs::path& dir, const Json& summary) {
  fs::create_directories(dir);
  text::write_file(dir / kSummaryFile, summary.dump(2) + "\n");
}

Json fractions_json(const SplitFractions& f) {
  return Json::array({f.train, f.val, f.test});
}

SplitFractions to_fractions(const std::vector<double>& v) {
  if (v.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "--split takes three fractions: train,val,test");
  }
  SplitFractions f{v[0], v[1], v[2]};
  validate_fractions(f);
  return f;
}

Json metrics_json(const MetricsReport& m) {
  Json j;
  j["global_accuracy"] = m.global_accuracy;
  j["mean_iou"] = m.mean_iou;
  j["f1_macro"] = m.f1_macro;
  j["f1_micro"] = m.f1_micro;
  return j;
}

// Reads src/dst lines of a three-point correspondence file.
PointCorrespondences read_alignment_file(const fs::path& path) {
  std::istringstream in(text::read_file(path));
  text::LineReader r(in, path.string());
  PointCorrespondences pc;
  bool has_src = false, has_dst = false;
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "align" || key == "end") continue;
    if (key != "src" && key != "dst") r.fail(line, "expected src or dst");
    text::expect_arity(r, line, 10);
    auto& pts = key == "src" ? pc.src : pc.dst;
    for (int i = 0; i < 3; ++i) {
      pts[i] = Vec3(text::to_double(r, line, 1 + 3 * i),
                    text::to_double(r, line, 2 + 3 * i),
                    text::to_double(r, line, 3 + 3 * i));
    }
    (key == "src" ? has_src : has_dst) = true;
  }
  if (!has_src || !has_dst) {
    throw Error(ErrorCode::kParse, path.string() + ": needs src and dst lines");
  }
  return pc;
}

// Loads a scene and registers it when correspondences are available. A file
// given on the command line overrides the manifest's own block.
SemanticScene load_aligned_scene(const fs::path& path,
                                 const std::optional<fs::path>& align_file,
                                 Json* summary) {
  SemanticScene scene = load_scene(path);
  std::optional<PointCorrespondences> pc = scene.alignment;
  if (align_file) pc = read_alignment_file(*align_file);
  if (pc) {
    const AlignmentResult a = align_from_three_points(pc->src, pc->dst);
    scene = apply_transform(a.transform, scene);
    if (summary) {
      (*summary)["alignment"] = {{"scale", a.transform.scale},
                                 {"max_residual", a.max_residual}};
    }
  }
  return scene;
}

// Evenly spaced subset of `count` states, always including the first.
std::vector<SceneState> pick_states(const std::vector<SceneState>& all,
                                    int count) {
  if (count <= 0 || static_cast<std::size_t>(count) >= all.size()) return all;
  std::vector<SceneState> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(all[static_cast<std::size_t>(i) * all.size() / count]);
  }
  return out;
}

void prepare_dir(const fs::path& dir, bool force,
                 const std::vector<std::string>& owned) {
  bool occupied = false;
  for (const auto& name : owned) occupied |= fs::exists(dir / name);
  if (occupied && !force) {
    throw Error(ErrorCode::kAlreadyExists,
                dir.string() + " already holds results; pass --force");
  }
  for (const auto& name : owned) fs::remove_all(dir / name);
  fs::create_directories(dir);
}

std::vector<std::string> png_names(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFile, dir.string() + ": no such directory");
  }
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") {
      names.push_back(e.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string view_label_name(int view_id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%03d.png", view_id);
  return buf;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string scene;
  std::string out;
  std::string poses;
  std::string align;
  std::vector<double> orbit_center{0.0, 0.0, 0.0};
  double orbit_radius = 25.0;
  std::vector<double> elevations{15.0, 30.0};
  int views_per_ring = 55;
  double focal_length = 35.0;
  int states = 0;
  int width = 64;
  int height = 64;
  int side = kDefaultCompositeSide;
  std::vector<double> split{0.9, 0.05, 0.05};
  bool srgb = false;
};

std::vector<CameraPose> rig_from(const SynthArgs& a, Json& summary) {
  if (!a.poses.empty()) {
    summary["camera"] = {{"poses", a.poses}};
    return import_poses(a.poses);
  }
  OrbitConfig cfg;
  cfg.center = Vec3(a.orbit_center[0], a.orbit_center[1], a.orbit_center[2]);
  cfg.radius = a.orbit_radius;
  cfg.elevations = a.elevations;
  cfg.views_per_ring = a.views_per_ring;
  cfg.focal_length = a.focal_length;
  summary["camera"] = {{"orbit_center", a.orbit_center},
                       {"orbit_radius", a.orbit_radius},
                       {"elevations", a.elevations},
                       {"views_per_ring", a.views_per_ring},
                       {"focal_length", a.focal_length}};
  return generate_orbit(cfg);
}

int run_synth(const SynthArgs& a, std::uint64_t seed, bool force, int workers) {
  Json summary;
  summary["command"] = "synth";
  summary["scene"] = a.scene;
  const SemanticScene scene = load_aligned_scene(
      a.scene, a.align.empty() ? std::nullopt : std::optional<fs::path>(a.align),
      &summary);
  const auto poses = rig_from(a, summary);
  const auto states =
      a.states > 0 ? daylight_states(a.states) : scene.states;
  BuildOptions opts;
  opts.render_width = a.width;
  opts.render_height = a.height;
  opts.side = a.side;
  opts.fractions = to_fractions(a.split);
  opts.seed = seed;
  opts.force = force;
  opts.render.srgb = a.srgb;
  opts.render.workers = 1;
  opts.workers = workers;
  const DatasetManifest m = build_dataset(scene, poses, states, a.out, opts);
  write_poses(poses, fs::path(a.out) / "poses.txt");

  summary["views"] = poses.size();
  summary["states"] = states.size();
  summary["render_size"] = {a.width, a.height};
  summary["side"] = a.side;
  summary["split"] = fractions_json(opts.fractions);
  summary["seed"] = seed;
  summary["pairs"] = m.entries.size();
  summary["train"] = m.entries_in(Split::kTrain).size();
  summary["val"] = m.entries_in(Split::kVal).size();
  summary["test"] = m.entries_in(Split::kTest).size();
  write_summary(a.out, summary);
  std::cout << m.entries.size() << " pairs written\n";
  return 0;
}

// ---------------------------------------------------------------- pack

struct PackArgs {
  std::string photos, labels, out;
  int side = kDefaultCompositeSide;
};

int run_pack(const PackArgs& a, int workers) {
  const std::size_t n =
      pack_directories(a.photos, a.labels, a.out, a.side, workers);
  write_summary(a.out, Json{{"command", "pack"},
                            {"photos", a.photos},
                            {"labels", a.labels},
                            {"side", a.side},
                            {"composites", n}});
  std::cout << n << " composites written\n";
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string dataset, out;
  int k = 1;
};

int run_train(const TrainArgs& a, int workers) {
  const fs::path root(a.dataset);
  const DatasetManifest m = read_manifest(root / "manifest");
  const BaselineModel model = train_baseline(m, root, a.k, workers);
  fs::create_directories(a.out);
  save_model(model, fs::path(a.out) / "model.txt");
  Json centroids = Json::object();
  for (ClassId c : kAllClasses) {
    const auto& cen = model.centroids[index_of(c)];
    if (cen) centroids[class_name(c)] = cen->count;
  }
  write_summary(a.out, Json{{"command", "train-baseline"},
                            {"dataset", a.dataset},
                            {"k", a.k},
                            {"train_images", m.entries_in(Split::kTrain).size()},
                            {"pixels_per_class", centroids}});
  std::cout << "model written to " << (fs::path(a.out) / "model.txt").string()
            << '\n';
  return 0;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
  std::string model, dataset, split = "test", images, out, gt_out;
};

int run_predict(const PredictArgs& a, bool force, int workers) {
  const BaselineModel model = load_model(a.model);
  if (a.dataset.empty() == a.images.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predict needs exactly one of --dataset or --images");
  }
  const fs::path out(a.out);
  if (fs::exists(out) && !fs::is_empty(out) && !force) {
    throw Error(ErrorCode::kAlreadyExists,
                out.string() + " is not empty; pass --force");
  }
  fs::create_directories(out);
  if (!a.gt_out.empty()) fs::create_directories(a.gt_out);

  std::size_t n = 0;
  if (!a.dataset.empty()) {
    const fs::path root(a.dataset);
    const auto entries =
        read_manifest(root / "manifest").entries_in(parse_split(a.split));
    parallel_for(entries.size(), workers, [&](std::size_t i) {
      const auto [photo, label] = unpack_composite(read_png(root / entries[i].file));
      const std::string name = fs::path(entries[i].file).filename().string();
      write_png(predict(model, photo), out / name);
      if (!a.gt_out.empty()) write_png(label, fs::path(a.gt_out) / name);
    });
    n = entries.size();
  } else {
    const auto names = png_names(a.images);
    parallel_for(names.size(), workers, [&](std::size_t i) {
      write_png(predict(model, read_png(fs::path(a.images) / names[i])),
                out / names[i]);
    });
    n = names.size();
  }
  write_summary(out, Json{{"command", "predict"},
                          {"model", a.model},
                          {"source", a.dataset.empty() ? a.images : a.dataset},
                          {"split", a.dataset.empty() ? "" : a.split},
                          {"predictions", n}});
  std::cout << n << " predictions written\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred, gt, mask, out, dataset;
  bool all_classes = false;
  double drift_threshold = kDefaultDriftThreshold;
};

int run_eval(const EvalArgs& a, int workers) {
  ClassPalette palette = default_palette();
  if (!a.dataset.empty()) {
    palette = read_manifest(fs::path(a.dataset) / "manifest").palette;
  }
  EvalOptions opts;
  opts.metrics.all_classes = a.all_classes;
  if (!a.mask.empty()) opts.mask_dir = fs::path(a.mask);
  opts.drift_threshold = a.drift_threshold;
  opts.workers = workers;
  const RunReport report = evaluate_run(a.pred, a.gt, palette, opts);
  std::cout << format_report(report);
  char line[64];
  std::snprintf(line, sizeof line, "accuracy %.2f%%\n",
                100.0 * report.pooled.global_accuracy);
  std::cout << line;
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    text::write_file(fs::path(a.out) / "report.json", report_json(report));
    text::write_file(fs::path(a.out) / "report.txt", format_report(report));
    Json s{{"command", "eval"},
           {"pred", a.pred},
           {"gt", a.gt},
           {"images", report.images.size()},
           {"all_classes", a.all_classes},
           {"drift_threshold", a.drift_threshold}};
    s["pooled"] = metrics_json(report.pooled);
    s["off_palette_fraction"] = report.off_palette_fraction;
    write_summary(a.out, s);
  }
  return 0;
}

// ---------------------------------------------------------------- blend

struct BlendArgs {
  std::string mesh, poses, labels, out, scene;
  double density = kDefaultTexelsPerMeter;
};

struct BlendRun {
  SemanticMesh fused;
  std::vector<ViewObservations> views;
  std::vector<int> view_ids;
};

// Projects every pose that has a `v###.png` label map in `labels`.
BlendRun blend_views(const TriMesh& mesh, const std::vector<CameraPose>& poses,
                     const fs::path& labels, const ClassPalette& palette,
                     double density, int workers) {
  validate_mesh(mesh, "blend mesh");
  BlendRun run;
  std::vector<CameraPose> used;
  for (const auto& p : poses) {
    if (fs::exists(labels / view_label_name(p.view_id))) {
      used.push_back(p);
      run.view_ids.push_back(p.view_id);
    }
  }
  if (used.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                labels.string() + ": no v###.png label matches a pose");
  }
  const TexelLayout layout = make_texel_layout(mesh, density);
  const TriangleBvh bvh({&mesh});
  run.views.resize(used.size());
  parallel_for(used.size(), workers, [&](std::size_t i) {
    const LabelMap lm =
        quantize(read_png(labels / view_label_name(used[i].view_id)), palette);
    run.views[i] = project_view(mesh, layout, bvh, used[i], lm);
  });
  run.fused = fuse(mesh, layout, run.views);
  return run;
}

Json blend_json(const BlendRun& run) {
  std::size_t observed = 0;
  for (std::size_t t = 0; t < run.fused.fused.size(); ++t) {
    if (run.fused.observation_count(t) > 0) ++observed;
  }
  std::size_t votes = 0;
  for (const auto& v : run.views) votes += v.size();
  return Json{{"views", run.view_ids.size()},
              {"triangles", run.fused.mesh.faces.size()},
              {"texels", run.fused.layout.texel_count()},
              {"observed_texels", observed},
              {"votes", votes}};
}

int run_blend(const BlendArgs& a, int workers) {
  const ClassPalette palette =
      a.scene.empty() ? default_palette() : load_scene(a.scene).palette;
  const TriMesh mesh = read_mesh(a.mesh);
  const BlendRun run = blend_views(mesh, import_poses(a.poses), a.labels,
                                   palette, a.density, workers);
  export_semantic_mesh(run.fused, palette, a.out);
  Json s{{"command", "blend"},
         {"mesh", a.mesh},
         {"poses", a.poses},
         {"labels", a.labels},
         {"texels_per_meter", a.density}};
  s["result"] = blend_json(run);
  write_summary(a.out, s);
  std::cout << s["result"]["observed_texels"].get<std::size_t>() << " of "
            << run.fused.layout.texel_count() << " texels observed from "
            << run.view_ids.size() << " views\n";
  return 0;
}

// ---------------------------------------------------------------- report

void print_flat(const Json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      print_flat(v, prefix.empty() ? k : prefix + "." + k);
    }
  } else {
    std::cout << prefix << ": " << j.dump() << '\n';
  }
}

int run_report(const std::string& dir) {
  const fs::path p = fs::path(dir) / kSummaryFile;
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kMissingFile, p.string() + ": no run summary");
  }
  Json j;
  try {
    j = Json::parse(text::read_file(p));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, p.string() + ": " + e.what());
  }
  print_flat(j, "");
  const fs::path report = fs::path(dir) / "report.txt";
  if (fs::exists(report)) std::cout << '\n' << text::read_file(report);
  return 0;
}

// ---------------------------------------------------------------- demo

struct DemoArgs {
  std::string out = "demo_out";
  int states = 4;
  int width = 64;
  int height = 64;
  int side = 64;
  std::vector<double> split{0.6, 0.2, 0.2};
  int k = 1;
  double density = 2.0;
};

ClassId majority_class(const BaselineModel& model) {
  ClassId best = ClassId::kBackground;
  std::uint64_t most = 0;
  for (ClassId c : kAllClasses) {
    const auto& cen = model.centroids[index_of(c)];
    if (cen && cen->count > most) {
      most = cen->count;
      best = c;
    }
  }
  return best;
}

int run_demo(const DemoArgs& a, std::uint64_t seed, bool force, int workers) {
  const fs::path out(a.out);
  prepare_dir(out, force,
              {"dataset", "model", "pred", "gt", "eval", "blend", kSummaryFile});
  const fs::path fx = fixture_dir();
  Json summary;
  summary["command"] = "demo";
  summary["seed"] = seed;

  // synth + pack
  const SemanticScene scene =
      load_aligned_scene(fx / "scene.txt", std::nullopt, &summary);
  const auto poses = import_poses(fx / "poses.txt");
  const auto states = pick_states(scene.states, a.states);
  BuildOptions bo;
  bo.render_width = a.width;
  bo.render_height = a.height;
  bo.side = a.side;
  bo.fractions = to_fractions(a.split);
  bo.seed = seed;
  bo.force = true;
  bo.workers = workers;
  const DatasetManifest m = build_dataset(scene, poses, states, out / "dataset", bo);
  summary["dataset"] = {{"views", poses.size()},
                        {"states", states.size()},
                        {"pairs", m.entries.size()},
                        {"split", fractions_json(bo.fractions)},
                        {"train", m.entries_in(Split::kTrain).size()},
                        {"val", m.entries_in(Split::kVal).size()},
                        {"test", m.entries_in(Split::kTest).size()}};
  std::cout << m.entries.size() << " pairs written\n";

  // train-baseline
  const BaselineModel model = train_baseline(m, out / "dataset", a.k, workers);
  fs::create_directories(out / "model");
  save_model(model, out / "model" / "model.txt");
  const ClassId constant = majority_class(model);

  // predict on held-out views
  const auto test = m.entries_in(Split::kTest);
  if (test.empty()) {
    throw Error(ErrorCode::kEmptyInput, "demo split leaves no test views");
  }
  const char* kPredictors[] = {"baseline", "constant", "random"};
  for (const char* p : kPredictors) fs::create_directories(out / "pred" / p);
  fs::create_directories(out / "gt");
  std::vector<std::string> names(test.size());
  std::vector<Image> gts(test.size());
  std::vector<std::vector<Image>> preds(3, std::vector<Image>(test.size()));
  parallel_for(test.size(), workers, [&](std::size_t i) {
    const auto [photo, label] =
        unpack_composite(read_png(out / "dataset" / test[i].file));
    names[i] = fs::path(test[i].file).filename().string();
    gts[i] = label;
    preds[0][i] = predict(model, photo);
    preds[1][i] = Image(photo.width(), photo.height(),
                        m.palette.color(constant));
  });
  // The random stream is consumed in manifest order so it stays independent
  // of the worker count.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < test.size(); ++i) {
    LabelMap lm(gts[i].width(), gts[i].height());
    for (std::size_t px = 0; px < lm.size(); ++px) {
      lm[px] = static_cast<ClassId>(((rng() >> 32) * kNumClasses) >> 32);
    }
    preds[2][i] = colorize(lm, m.palette);
  }
  for (std::size_t i = 0; i < test.size(); ++i) {
    write_png(gts[i], out / "gt" / names[i]);
    for (int p = 0; p < 3; ++p) {
      write_png(preds[p][i], out / "pred" / kPredictors[p] / names[i]);
    }
  }

  // eval
  fs::create_directories(out / "eval");
  EvalOptions eo;
  eo.workers = workers;
  Json evals;
  std::array<double, 3> miou{};
  for (int p = 0; p < 3; ++p) {
    const RunReport r = evaluate_images(names, preds[p], gts, m.palette, eo);
    text::write_file(out / "eval" / (std::string(kPredictors[p]) + ".json"),
                     report_json(r));
    text::write_file(out / "eval" / (std::string(kPredictors[p]) + ".txt"),
                     format_report(r));
    miou[p] = r.pooled.mean_iou;
    evals[kPredictors[p]] = metrics_json(r.pooled);
  }
  evals["constant"]["class"] = class_name(constant);
  summary["eval"] = evals;
  summary["baseline_beats_constant"] = miou[0] > miou[1];
  summary["baseline_beats_random"] = miou[0] > miou[2];

  // blend: baseline predictions of every view under the first state
  const fs::path labels = out / "blend" / "labels";
  fs::create_directories(labels);
  const Renderer renderer(scene);
  parallel_for(poses.size(), workers, [&](std::size_t i) {
    const Image photo = renderer.photoreal(poses[i], states.front(), a.width,
                                           a.height);
    write_png(predict(model, photo), labels / view_label_name(poses[i].view_id));
  });
  std::vector<ClassId> truth;
  const TriMesh mesh = merge_scene_meshes(scene, &truth);
  write_mesh(mesh, out / "blend" / "scene_mesh.obj");
  const BlendRun run =
      blend_views(mesh, poses, labels, m.palette, a.density, workers);
  export_semantic_mesh(run.fused, m.palette, out / "blend");
  const BlendScore score = score_blend(run.fused, run.views, truth);
  Json bj = blend_json(run);
  bj["texels_per_meter"] = a.density;
  bj["fused_accuracy"] = score.fused_accuracy;
  bj["single_view_accuracy"] = score.single_view_accuracy;
  summary["blend"] = bj;
  write_summary(out, summary);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mIoU baseline %.4f  constant(%s) %.4f  random %.4f\n", miou[0],
                std::string(class_name(constant)).c_str(), miou[1], miou[2]);
  std::cout << buf;
  std::snprintf(buf, sizeof buf,
                "blend texel accuracy %.4f fused vs %.4f single view\n",
                score.fused_accuracy, score.single_view_accuracy);
  std::cout << buf;
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Synthetic BIM segmentation data: render, pack, train, "
               "evaluate and blend."};
  app.set_config("--config", "", "TOML/INI file of option defaults");
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool force = false;
  int workers = default_worker_count();
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Seed for every randomized step");
    sub->add_flag("--force", force, "Replace existing outputs");
    sub->add_option("--workers", workers,
                    "Worker threads (default: $BIMSYNTH_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Render pairs and build a dataset");
  synth->add_option("--scene", sa.scene, "Scene manifest")->required();
  synth->add_option("--out", sa.out, "Dataset directory")->required();
  synth->add_option("--poses", sa.poses, "Pose file (replaces the orbit)");
  synth->add_option("--align", sa.align, "Three-point correspondence file");
  synth->add_option("--orbit-center", sa.orbit_center, "x y z")->expected(3);
  synth->add_option("--orbit-radius", sa.orbit_radius);
  synth->add_option("--elevations", sa.elevations, "Ring elevations (degrees)")
      ->delimiter(',');
  synth->add_option("--views-per-ring", sa.views_per_ring);
  synth->add_option("--focal-length", sa.focal_length, "mm, 36 mm sensor");
  synth->add_option("--states", sa.states,
                    "Generate N daylight states instead of the scene's own");
  synth->add_option("--width", sa.width, "Render width")->check(CLI::PositiveNumber);
  synth->add_option("--height", sa.height, "Render height")->check(CLI::PositiveNumber);
  synth->add_option("--side", sa.side, "Composite square side");
  synth->add_option("--split", sa.split, "train,val,test")->delimiter(',');
  synth->add_flag("--srgb", sa.srgb, "sRGB-encode photoreal renders");
  add_common(synth);

  PackArgs pa;
  auto* pack = app.add_subcommand("pack", "Stitch photo/label pairs by name");
  pack->add_option("--photos", pa.photos)->required();
  pack->add_option("--labels", pa.labels)->required();
  pack->add_option("--out", pa.out)->required();
  pack->add_option("--side", pa.side);
  add_common(pack);

  TrainArgs ta;
  auto* train = app.add_subcommand("train-baseline",
                                    "Fit the nearest-centroid segmenter");
  train->add_option("--dataset", ta.dataset)->required();
  train->add_option("--out", ta.out, "Model directory")->required();
  train->add_option("--k", ta.k, "Box-average window parameter")
      ->check(CLI::PositiveNumber);
  add_common(train);

  PredictArgs pra;
  auto* pred = app.add_subcommand("predict", "Label photoreal images");
  pred->add_option("--model", pra.model, "model.txt")->required();
  pred->add_option("--dataset", pra.dataset, "Predict a dataset split");
  pred->add_option("--split", pra.split, "train, val or test");
  pred->add_option("--images", pra.images, "Predict every PNG in a directory");
  pred->add_option("--out", pra.out)->required();
  pred->add_option("--gt-out", pra.gt_out, "Also write the label halves here");
  add_common(pred);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score predictions against labels");
  eval->add_option("--pred", ea.pred)->required();
  eval->add_option("--gt", ea.gt)->required();
  eval->add_option("--mask", ea.mask, "Per-image masks; black pixels ignored");
  eval->add_option("--dataset", ea.dataset, "Take the palette from a dataset");
  eval->add_option("--out", ea.out, "Write report.json and a run summary");
  eval->add_flag("--all-classes", ea.all_classes,
                 "Average over all six classes; undefined ratios count as 0");
  eval->add_option("--drift-threshold", ea.drift_threshold);
  add_common(eval);

  BlendArgs ba;
  auto* blend = app.add_subcommand("blend", "Fuse per-view labels on a mesh");
  blend->add_option("--mesh", ba.mesh)->required();
  blend->add_option("--poses", ba.poses)->required();
  blend->add_option("--labels", ba.labels, "Directory of v###.png")->required();
  blend->add_option("--out", ba.out)->required();
  blend->add_option("--scene", ba.scene, "Take the palette from a scene");
  blend->add_option("--density", ba.density, "Texels per meter of edge")
      ->check(CLI::PositiveNumber);
  add_common(blend);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Print a run summary");
  report->add_option("dir", report_dir, "Output directory of a previous run")
      ->required();

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "End-to-end run on the fixture");
  demo->add_option("--out", da.out);
  demo->add_option("--states", da.states);
  demo->add_option("--width", da.width)->check(CLI::PositiveNumber);
  demo->add_option("--height", da.height)->check(CLI::PositiveNumber);
  demo->add_option("--side", da.side);
  demo->add_option("--split", da.split)->delimiter(',');
  demo->add_option("--k", da.k)->check(CLI::PositiveNumber);
  demo->add_option("--density", da.density)->check(CLI::PositiveNumber);
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth) return run_synth(sa, seed, force, workers);
    if (*pack) return run_pack(pa, workers);
    if (*train) return run_train(ta, workers);
    if (*pred) return run_predict(pra, force, workers);
    if (*eval) return run_eval(ea, workers);
    if (*blend) return run_blend(ba, workers);
    if (*report) return run_report(report_dir);
    if (*demo) return run_demo(da, seed, force, workers);
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what()
              << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run_cli(static_cast<int>(storage.size()), argv.data());
}

}  // namespace bimsynth
