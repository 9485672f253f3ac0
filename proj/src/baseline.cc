#include "bimsynth/baseline.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "bimsynth/error.h"
#include "bimsynth/parallel.h"
#include "text_io.h"

namespace bimsynth {

namespace fs = std::filesystem;

std::array<double, 3> BaselineModel::centroid_rgb(ClassId c) const {
  const auto& cen = centroids[index_of(c)];
  if (!cen) {
    throw Error(ErrorCode::kInvalidArgument,
                "no centroid for class " + std::string(class_name(c)));
  }
  return {cen->mean[0] * 255.0, cen->mean[1] * 255.0, cen->mean[2] * 255.0};
}

std::vector<Feature> pixel_features(const Image& photo, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const int w = photo.width(), h = photo.height();
  const int radius = k - 1;
  std::vector<Feature> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double r = 0, g = 0, b = 0;
      int n = 0;
      for (int yy = std::max(0, y - radius); yy <= std::min(h - 1, y + radius);
           ++yy) {
        for (int xx = std::max(0, x - radius);
             xx <= std::min(w - 1, x + radius); ++xx) {
          const Rgb c = photo.at(xx, yy);
          r += c.r;
          g += c.g;
          b += c.b;
          ++n;
        }
      }
      const double norm = 255.0 * n;
      out[static_cast<std::size_t>(y) * w + x] = {
          r / norm, g / norm, b / norm, (x + 0.5) / w, (y + 0.5) / h};
    }
  }
  return out;
}

BaselineTrainer::BaselineTrainer(const ClassPalette& palette, int k)
    : palette_(palette), k_(k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
}

void BaselineTrainer::add(const Image& photo, const Image& label) {
  if (photo.width() != label.width() || photo.height() != label.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "photo and label halves differ in size");
  }
  const auto features = pixel_features(photo, k_);
  for (int y = 0; y < label.height(); ++y) {
    for (int x = 0; x < label.width(); ++x) {
      const Rgb c = label.at(x, y);
      const ClassId cls = palette_.decode(c).value_or(palette_.nearest(c));
      const Feature& f = features[static_cast<std::size_t>(y) * label.width() + x];
      Feature& sum = sums_[index_of(cls)];
      for (int d = 0; d < kFeatureDim; ++d) sum[d] += f[d];
      ++counts_[index_of(cls)];
    }
  }
}

void BaselineTrainer::add_composite(const Image& composite) {
  const auto [photo, label] = unpack_composite(composite);
  add(photo, label);
}

void BaselineTrainer::merge(const BaselineTrainer& other) {
  for (int c = 0; c < kNumClasses; ++c) {
    for (int d = 0; d < kFeatureDim; ++d) sums_[c][d] += other.sums_[c][d];
    counts_[c] += other.counts_[c];
  }
}

BaselineModel BaselineTrainer::finish() const {
  BaselineModel model;
  model.k = k_;
  model.palette = palette_;
  bool any = false;
  for (int c = 0; c < kNumClasses; ++c) {
    if (counts_[c] == 0) continue;
    Centroid cen;
    cen.count = counts_[c];
    for (int d = 0; d < kFeatureDim; ++d) {
      cen.mean[d] = sums_[c][d] / static_cast<double>(counts_[c]);
    }
    model.centroids[c] = cen;
    any = true;
  }
  if (!any) throw Error(ErrorCode::kEmptyInput, "no training pixels");
  return model;
}

BaselineModel train_baseline(const DatasetManifest& manifest,
                             const fs::path& root, int k, int workers) {
  const auto train = manifest.entries_in(Split::kTrain);
  if (train.empty()) {
    throw Error(ErrorCode::kEmptyInput, "dataset has an empty train split");
  }
  std::vector<BaselineTrainer> partial(train.size(),
                                       BaselineTrainer(manifest.palette, k));
  parallel_for(train.size(), workers, [&](std::size_t i) {
    partial[i].add_composite(read_png(root / train[i].file));
  });
  // Merge in manifest order so the floating-point sums are reproducible.
  BaselineTrainer total(manifest.palette, k);
  for (const auto& p : partial) total.merge(p);
  return total.finish();
}

LabelMap predict_labels(const BaselineModel& model, const Image& photo) {
  const auto features = pixel_features(photo, model.k);
  LabelMap out(photo.width(), photo.height());
  for (std::size_t i = 0; i < features.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    ClassId best_cls = ClassId::kBackground;
    for (ClassId c : kAllClasses) {
      const auto& cen = model.centroids[index_of(c)];
      if (!cen) continue;
      double d2 = 0.0;
      for (int d = 0; d < kFeatureDim; ++d) {
        const double diff = features[i][d] - cen->mean[d];
        d2 += diff * diff;
      }
      if (d2 < best) {  // strict: lower ids keep ties
        best = d2;
        best_cls = c;
      }
    }
    out[i] = best_cls;
  }
  return out;
}

Image predict(const BaselineModel& model, const Image& photo) {
  return colorize(predict_labels(model, photo), model.palette);
}

void save_model(const BaselineModel& model, const fs::path& path) {
  std::ostringstream out;
  out << "# nearest-centroid model: feature = r g b x y (all in [0,1])\n";
  out << "baseline_model 1\n";
  out << "k " << model.k << '\n';
  for (ClassId c : kAllClasses) {
    const Rgb rgb = model.palette.color(c);
    out << "palette " << class_name(c) << ' ' << int{rgb.r} << ' ' << int{rgb.g}
        << ' ' << int{rgb.b} << '\n';
  }
  for (ClassId c : kAllClasses) {
    const auto& cen = model.centroids[index_of(c)];
    if (!cen) continue;
    out << "centroid " << class_name(c) << ' ' << cen->count;
    for (double v : cen->mean) out << ' ' << text::format_double(v);
    out << '\n';
  }
  text::write_file(path, out.str());
}

BaselineModel load_model(const fs::path& path) {
  std::istringstream in(text::read_file(path));
  text::LineReader r(in, path.string());
  BaselineModel model;
  std::array<Rgb, kNumClasses> colors = default_palette().colors();
  bool header = false;
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "baseline_model") {
      text::expect_arity(r, line, 2);
      if (text::to_int(r, line, 1) != 1) r.fail(line, "unsupported version");
      header = true;
    } else if (key == "k") {
      text::expect_arity(r, line, 2);
      model.k = static_cast<int>(text::to_int(r, line, 1));
      if (model.k < 1) r.fail(line, "k must be >= 1");
    } else if (key == "palette") {
      text::expect_arity(r, line, 5);
      std::array<std::uint8_t, 3> ch{};
      for (int i = 0; i < 3; ++i) {
        const long long v = text::to_int(r, line, 2 + i);
        if (v < 0 || v > 255) r.fail(line, "color channel outside 0..255");
        ch[i] = static_cast<std::uint8_t>(v);
      }
      colors[index_of(parse_class_name(line.tokens[1]))] = {ch[0], ch[1], ch[2]};
    } else if (key == "centroid") {
      text::expect_arity(r, line, 3 + kFeatureDim);
      Centroid cen;
      const long long count = text::to_int(r, line, 2);
      if (count <= 0) r.fail(line, "centroid count must be positive");
      cen.count = static_cast<std::uint64_t>(count);
      for (int d = 0; d < kFeatureDim; ++d) {
        cen.mean[d] = text::to_double(r, line, 3 + d);
      }
      model.centroids[index_of(parse_class_name(line.tokens[1]))] = cen;
    } else {
      r.fail(line, "unknown model key '" + key + "'");
    }
  }
  if (!header) {
    throw Error(ErrorCode::kParse, path.string() + ": not a baseline model");
  }
  model.palette = ClassPalette(colors);
  if (std::none_of(model.centroids.begin(), model.centroids.end(),
                   [](const auto& c) { return c.has_value(); })) {
    throw Error(ErrorCode::kParse, path.string() + ": model has no centroids");
  }
  return model;
}

}  // namespace bimsynth
