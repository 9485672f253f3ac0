#include "bimsynth/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "bimsynth/error.h"
#include "bimsynth/parallel.h"
#include "text_io.h"

namespace bimsynth {

namespace fs = std::filesystem;

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw Error(ErrorCode::kParse, "unknown split '" + name + "'");
}

void validate_fractions(const SplitFractions& f) {
  if (!(f.train >= 0 && f.val >= 0 && f.test >= 0) ||
      std::abs(f.train + f.val + f.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "split fractions must be non-negative and sum to 1");
  }
}

std::vector<DatasetEntry> DatasetManifest::entries_in(Split s) const {
  std::vector<DatasetEntry> out;
  for (const auto& e : entries) {
    if (e.split == s) out.push_back(e);
  }
  return out;
}

void write_manifest(const DatasetManifest& m, const fs::path& path) {
  std::ostringstream out;
  out << "# composite dataset manifest: left = photoreal input, right = label "
         "target\n";
  out << "format 1\n";
  out << "image_size " << m.image_size << '\n';
  out << "render_size " << m.render_width << ' ' << m.render_height << '\n';
  out << "seed " << m.seed << '\n';
  out << "split_fractions " << text::format_double(m.fractions.train) << ' '
      << text::format_double(m.fractions.val) << ' '
      << text::format_double(m.fractions.test) << '\n';
  for (ClassId c : kAllClasses) {
    const Rgb rgb = m.palette.color(c);
    out << "palette " << class_name(c) << ' ' << int{rgb.r} << ' ' << int{rgb.g}
        << ' ' << int{rgb.b} << '\n';
  }
  for (const auto& e : m.entries) {
    out << "entry " << e.file << ' ' << e.view_id << ' ' << e.state_id << ' '
        << split_name(e.split) << '\n';
  }
  text::write_file(path, out.str());
}

DatasetManifest read_manifest(const fs::path& path) {
  std::istringstream in(text::read_file(path));
  text::LineReader r(in, path.string());
  DatasetManifest m;
  std::array<Rgb, kNumClasses> colors = default_palette().colors();
  std::set<std::string> files;
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "format") {
      text::expect_arity(r, line, 2);
      if (text::to_int(r, line, 1) != 1) r.fail(line, "unsupported format");
    } else if (key == "image_size") {
      text::expect_arity(r, line, 2);
      m.image_size = static_cast<int>(text::to_int(r, line, 1));
    } else if (key == "render_size") {
      text::expect_arity(r, line, 3);
      m.render_width = static_cast<int>(text::to_int(r, line, 1));
      m.render_height = static_cast<int>(text::to_int(r, line, 2));
    } else if (key == "seed") {
      text::expect_arity(r, line, 2);
      m.seed = static_cast<std::uint64_t>(text::to_int(r, line, 1));
    } else if (key == "split_fractions") {
      text::expect_arity(r, line, 4);
      m.fractions = {text::to_double(r, line, 1), text::to_double(r, line, 2),
                     text::to_double(r, line, 3)};
    } else if (key == "palette") {
      text::expect_arity(r, line, 5);
      const ClassId c = parse_class_name(line.tokens[1]);
      for (int k = 0; k < 3; ++k) {
        const long long v = text::to_int(r, line, 2 + k);
        if (v < 0 || v > 255) r.fail(line, "color channel outside 0..255");
      }
      colors[index_of(c)] = {static_cast<std::uint8_t>(text::to_int(r, line, 2)),
                             static_cast<std::uint8_t>(text::to_int(r, line, 3)),
                             static_cast<std::uint8_t>(text::to_int(r, line, 4))};
    } else if (key == "entry") {
      text::expect_arity(r, line, 5);
      DatasetEntry e;
      e.file = line.tokens[1];
      e.view_id = static_cast<int>(text::to_int(r, line, 2));
      e.state_id = static_cast<int>(text::to_int(r, line, 3));
      try {
        e.split = parse_split(line.tokens[4]);
      } catch (const Error&) {
        r.fail(line, "unknown split '" + line.tokens[4] + "'");
      }
      if (!files.insert(e.file).second) r.fail(line, "duplicate file " + e.file);
      m.entries.push_back(std::move(e));
    } else {
      r.fail(line, "unknown manifest key '" + key + "'");
    }
  }
  m.palette = ClassPalette(colors);
  validate_fractions(m.fractions);
  return m;
}

std::string composite_name(int state_id, int view_id) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "s%03d_v%03d.png", state_id, view_id);
  return buf;
}

Image pack_images(const Image& photoreal, const Image& label, int side,
                  const ClassPalette& palette) {
  if (side < kMinCompositeSide) {
    throw Error(ErrorCode::kInvalidArgument,
                "composite side must be at least " +
                    std::to_string(kMinCompositeSide) + " pixels");
  }
  if (photoreal.width() != label.width() ||
      photoreal.height() != label.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "photoreal and label images differ in size");
  }
  Image right = resize_nearest(label, side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      right.set(x, y, palette.color(palette.nearest(right.at(x, y))));
    }
  }
  return hstack(resize_bilinear(photoreal, side, side), right);
}

Image pack_pair(const RenderPair& pair, int side, const ClassPalette& palette) {
  if (pair.id_buffer.width() != pair.label.width() ||
      pair.id_buffer.height() != pair.label.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "id buffer and label image differ in size");
  }
  return pack_images(pair.photoreal, pair.label, side, palette);
}

std::pair<Image, Image> unpack_composite(const Image& composite) {
  if (composite.width() % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "composite width " + std::to_string(composite.width()) +
                    " is odd");
  }
  const int half = composite.width() / 2;
  return {crop(composite, 0, 0, half, composite.height()),
          crop(composite, half, 0, half, composite.height())};
}

namespace {

// Uniform integer in [0, n) without the implementation-defined behavior of
// std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

std::map<int, Split> assign_splits(std::vector<int> view_ids,
                                   const SplitFractions& fractions,
                                   std::uint64_t seed) {
  validate_fractions(fractions);
  std::sort(view_ids.begin(), view_ids.end());
  view_ids.erase(std::unique(view_ids.begin(), view_ids.end()), view_ids.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = view_ids.size(); i > 1; --i) {
    std::swap(view_ids[i - 1], view_ids[bounded(rng, i)]);
  }

  const std::size_t n = view_ids.size();
  const std::array<double, 3> frac = {fractions.train, fractions.val,
                                      fractions.test};
  std::array<std::size_t, 3> count{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = frac[k] * static_cast<double>(n);
    count[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[k] = exact - static_cast<double>(count[k]);
    assigned += count[k];
  }
  while (assigned < n) {
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      if (rem[k] > rem[best]) best = k;
    }
    ++count[best];
    rem[best] = -1.0;
    ++assigned;
  }
  while (assigned > n) {  // only reachable through rounding noise
    for (int k = 2; k >= 0 && assigned > n; --k) {
      if (count[k] > 0) {
        --count[k];
        --assigned;
      }
    }
  }

  std::map<int, Split> out;
  std::size_t i = 0;
  const std::array<Split, 3> order = {Split::kTrain, Split::kVal, Split::kTest};
  for (int k = 0; k < 3; ++k) {
    for (std::size_t c = 0; c < count[k]; ++c) out[view_ids[i++]] = order[k];
  }
  return out;
}

namespace {

void prepare_output_dir(const fs::path& out_dir, bool force) {
  const std::array<fs::path, 4> owned = {out_dir / "manifest", out_dir / "train",
                                         out_dir / "val", out_dir / "test"};
  bool exists = false;
  for (const auto& p : owned) exists = exists || fs::exists(p);
  if (exists && !force) {
    throw Error(ErrorCode::kAlreadyExists,
                "a dataset already exists in " + out_dir.string() +
                    " (use --force to replace it)");
  }
  for (const auto& p : owned) fs::remove_all(p);
  for (const char* s : {"train", "val", "test"}) {
    fs::create_directories(out_dir / s);
  }
}

}  // namespace

DatasetManifest build_dataset(const SemanticScene& scene,
                              const std::vector<CameraPose>& poses,
                              const std::vector<SceneState>& states,
                              const fs::path& out_dir,
                              const BuildOptions& opts) {
  if (poses.empty()) {
    throw Error(ErrorCode::kEmptyCameraRig, "empty camera rig");
  }
  if (states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no photoreal scene states");
  }
  if (opts.side < kMinCompositeSide) {
    throw Error(ErrorCode::kInvalidArgument, "composite side must be >= 8");
  }
  validate_fractions(opts.fractions);
  std::vector<int> view_ids;
  for (const auto& p : poses) view_ids.push_back(p.view_id);
  const auto splits = assign_splits(view_ids, opts.fractions, opts.seed);
  if (splits.size() != poses.size()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate view ids in camera rig");
  }
  prepare_output_dir(out_dir, opts.force);

  DatasetManifest manifest;
  manifest.palette = scene.palette;
  manifest.image_size = opts.side;
  manifest.render_width = opts.render_width;
  manifest.render_height = opts.render_height;
  manifest.seed = opts.seed;
  manifest.fractions = opts.fractions;
  manifest.entries.resize(poses.size() * states.size());

  const Renderer renderer(scene);
  RenderOptions per_job = opts.render;
  per_job.workers = 1;
  const std::size_t n_states = states.size();
  parallel_for(poses.size(), opts.workers, [&](std::size_t v) {
    const CameraPose& pose = poses[v];
    const LabelRender label =
        renderer.label(pose, opts.render_width, opts.render_height, per_job);
    const Split split = splits.at(pose.view_id);
    for (std::size_t s = 0; s < n_states; ++s) {
      const SceneState& state = states[s];
      RenderPair pair;
      pair.photoreal = renderer.photoreal(pose, state, opts.render_width,
                                          opts.render_height, per_job);
      pair.label = label.image;
      pair.id_buffer = label.ids;
      pair.view_id = pose.view_id;
      pair.state_id = state.id;

      DatasetEntry& e = manifest.entries[v * n_states + s];
      e.view_id = pose.view_id;
      e.state_id = state.id;
      e.split = split;
      e.file = std::string(split_name(split)) + "/" +
               composite_name(state.id, pose.view_id);
      write_png(pack_pair(pair, opts.side, scene.palette), out_dir / e.file);
    }
  });
  write_manifest(manifest, out_dir / "manifest");
  return manifest;
}

std::size_t pack_directories(const fs::path& photo_dir,
                             const fs::path& label_dir, const fs::path& out_dir,
                             int side, int workers,
                             const ClassPalette& palette) {
  std::vector<std::string> names;
  if (!fs::is_directory(photo_dir) || !fs::is_directory(label_dir)) {
    throw Error(ErrorCode::kMissingFile, "photo and label directories required");
  }
  for (const auto& entry : fs::directory_iterator(photo_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png" &&
        fs::exists(label_dir / entry.path().filename())) {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no photo/label pairs with matching names");
  }
  fs::create_directories(out_dir);
  parallel_for(names.size(), workers, [&](std::size_t i) {
    write_png(pack_images(read_png(photo_dir / names[i]),
                          read_png(label_dir / names[i]), side, palette),
              out_dir / names[i]);
  });
  return names.size();
}

}  // namespace bimsynth
