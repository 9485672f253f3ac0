#include "bimsynth/seg_eval.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "bimsynth/error.h"
#include "bimsynth/parallel.h"
#include "json.hpp"

namespace bimsynth {

namespace fs = std::filesystem;

LabelMap quantize(const Image& img, const ClassPalette& palette) {
  LabelMap out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.set(x, y, palette.nearest(img.at(x, y)));
    }
  }
  return out;
}

PixelMask PixelMask::from_image(const Image& img) {
  PixelMask m{img.width(), img.height(), {}};
  m.include.resize(static_cast<std::size_t>(img.width()) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      m.include[static_cast<std::size_t>(y) * img.width() + x] =
          img.at(x, y) == Rgb{} ? 0 : 1;
    }
  }
  return m;
}

std::uint64_t count_off_palette(const Image& img, const ClassPalette& palette,
                                double threshold, const PixelMask* mask) {
  const double limit = threshold * threshold;
  std::uint64_t n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (mask && !mask->include[static_cast<std::size_t>(y) * img.width() + x]) {
        continue;
      }
      if (palette.nearest_squared_distance(img.at(x, y)) > limit) ++n;
    }
  }
  return n;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  for (int i = 0; i < kNumClasses; ++i) {
    for (int j = 0; j < kNumClasses; ++j) matrix_[i][j] += other.matrix_[i][j];
  }
  total_ += other.total_;
  return *this;
}

std::uint64_t ConfusionCounts::correct() const {
  std::uint64_t n = 0;
  for (int i = 0; i < kNumClasses; ++i) n += matrix_[i][i];
  return n;
}

std::uint64_t ConfusionCounts::fp(ClassId c) const {
  const int k = index_of(c);
  std::uint64_t n = 0;
  for (int i = 0; i < kNumClasses; ++i) {
    if (i != k) n += matrix_[i][k];
  }
  return n;
}

std::uint64_t ConfusionCounts::fn(ClassId c) const {
  const int k = index_of(c);
  std::uint64_t n = 0;
  for (int j = 0; j < kNumClasses; ++j) {
    if (j != k) n += matrix_[k][j];
  }
  return n;
}

ConfusionCounts confusion(const LabelMap& gt, const LabelMap& pred,
                          const PixelMask* mask) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ground truth is " + std::to_string(gt.width()) + "x" +
                    std::to_string(gt.height()) + ", prediction is " +
                    std::to_string(pred.width()) + "x" +
                    std::to_string(pred.height()));
  }
  if (mask && (mask->width != gt.width() || mask->height != gt.height())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask size differs from the label maps");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (mask && !mask->include[i]) continue;
    counts.add(gt[i], pred[i]);
  }
  return counts;
}

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport metrics(const ConfusionCounts& counts,
                      const MetricsOptions& opts) {
  if (counts.total() == 0) {
    throw Error(ErrorCode::kEmptyInput, "no pixels were evaluated");
  }
  MetricsReport r;
  const double total = static_cast<double>(counts.total());
  r.global_accuracy = static_cast<double>(counts.correct()) / total;

  for (ClassId c : kAllClasses) {
    ClassMetrics& m = r.per_class[index_of(c)];
    const std::uint64_t tp = counts.tp(c), fp = counts.fp(c),
                        fn = counts.fn(c), tn = counts.tn(c);
    m.accuracy = static_cast<double>(tp + tn) / total;
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    // 2PR/(P+R) rewritten over counts; equals it whenever P and R exist and
    // stays defined (as 0) when tp = 0 but fp + fn > 0.
    m.f1 = ratio(2 * tp, 2 * tp + fp + fn);
    m.iou = ratio(tp, tp + fp + fn);
    if (opts.all_classes || counts.present(c)) r.classes_included.push_back(c);
  }

  auto macro = [&](std::optional<double> ClassMetrics::*field,
                   const char* name) {
    double sum = 0.0;
    int n = 0;
    for (ClassId c : r.classes_included) {
      const auto& v = r.per_class[index_of(c)].*field;
      if (v) {
        sum += *v;
        ++n;
      } else {
        r.undefined.push_back(std::string(class_name(c)) + "." + name);
        if (opts.all_classes) ++n;  // counts as zero
      }
    }
    return n > 0 ? sum / n : 0.0;
  };
  r.precision_macro = macro(&ClassMetrics::precision, "precision");
  r.recall_macro = macro(&ClassMetrics::recall, "recall");
  r.f1_macro = macro(&ClassMetrics::f1, "f1");
  r.mean_iou = macro(&ClassMetrics::iou, "iou");

  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (ClassId c : r.classes_included) {
    tp += counts.tp(c);
    fp += counts.fp(c);
    fn += counts.fn(c);
  }
  r.precision_micro = ratio(tp, tp + fp).value_or(0.0);
  r.recall_micro = ratio(tp, tp + fn).value_or(0.0);
  r.f1_micro = ratio(2 * tp, 2 * tp + fp + fn).value_or(0.0);
  return r;
}

RunReport evaluate_images(const std::vector<std::string>& names,
                          const std::vector<Image>& preds,
                          const std::vector<Image>& gts,
                          const ClassPalette& palette, const EvalOptions& opts,
                          const std::vector<PixelMask>* masks) {
  if (preds.size() != gts.size() || names.size() != preds.size() ||
      (masks && masks->size() != preds.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "prediction, ground truth and mask lists differ in length");
  }
  if (preds.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no image pairs to evaluate");
  }
  RunReport run;
  run.drift_threshold = opts.drift_threshold;
  run.images.resize(preds.size());
  std::vector<std::uint64_t> drift(preds.size(), 0);
  parallel_for(preds.size(), opts.workers, [&](std::size_t i) {
    const Image& pred = preds[i];
    const Image& gt = gts[i];
    if (pred.width() != gt.width() || pred.height() != gt.height()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  names[i] + ": prediction and ground truth sizes differ");
    }
    const PixelMask* mask = masks ? &(*masks)[i] : nullptr;
    ImageReport& rep = run.images[i];
    rep.name = names[i];
    rep.counts = confusion(quantize(gt, palette), quantize(pred, palette), mask);
    drift[i] = count_off_palette(pred, palette, opts.drift_threshold, mask);
    if (rep.counts.total() > 0) {
      rep.metrics = metrics(rep.counts, opts.metrics);
      rep.off_palette_fraction =
          static_cast<double>(drift[i]) / static_cast<double>(rep.counts.total());
    }
  });
  std::uint64_t drift_total = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    run.counts += run.images[i].counts;
    drift_total += drift[i];
  }
  run.pooled = metrics(run.counts, opts.metrics);
  run.off_palette_fraction =
      static_cast<double>(drift_total) / static_cast<double>(run.counts.total());
  return run;
}

namespace {

std::set<std::string> png_names(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFile, "not a directory: " + dir.string());
  }
  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      names.insert(entry.path().filename().string());
    }
  }
  return names;
}

}  // namespace

RunReport evaluate_run(const fs::path& pred_dir, const fs::path& gt_dir,
                       const ClassPalette& palette, const EvalOptions& opts) {
  const auto preds = png_names(pred_dir);
  const auto gts = png_names(gt_dir);
  std::vector<std::string> unmatched;
  for (const auto& n : preds) {
    if (!gts.count(n)) unmatched.push_back("prediction " + n);
  }
  for (const auto& n : gts) {
    if (!preds.count(n)) unmatched.push_back("ground truth " + n);
  }
  std::vector<std::string> names;
  for (const auto& n : preds) {
    if (gts.count(n)) names.push_back(n);
  }
  if (names.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "no matching image names between " + pred_dir.string() +
                    " and " + gt_dir.string());
  }
  if (!unmatched.empty()) {
    std::string msg = std::to_string(unmatched.size()) + " unmatched file(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, unmatched.size()); ++i) {
      msg += " " + unmatched[i];
    }
    throw Error(ErrorCode::kUnmatchedFiles, msg);
  }

  std::vector<Image> pred_imgs(names.size()), gt_imgs(names.size());
  std::vector<PixelMask> masks;
  if (opts.mask_dir) masks.resize(names.size());
  parallel_for(names.size(), opts.workers, [&](std::size_t i) {
    pred_imgs[i] = read_png(pred_dir / names[i]);
    gt_imgs[i] = read_png(gt_dir / names[i]);
    if (opts.mask_dir) {
      masks[i] = PixelMask::from_image(read_png(*opts.mask_dir / names[i]));
    }
  });
  return evaluate_images(names, pred_imgs, gt_imgs, palette, opts,
                         opts.mask_dir ? &masks : nullptr);
}

namespace {

// Table order: building objects first, background last.
constexpr std::array<ClassId, kNumClasses> kTableOrder = {
    ClassId::kWall,   ClassId::kWindow, ClassId::kDoor,
    ClassId::kColumn, ClassId::kRoof,   ClassId::kBackground};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string title_case(std::string_view name) {
  std::string s(name);
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

nlohmann::json metrics_json(const MetricsReport& m) {
  nlohmann::json j;
  j["global_accuracy"] = m.global_accuracy;
  j["precision_macro"] = m.precision_macro;
  j["precision_micro"] = m.precision_micro;
  j["recall_macro"] = m.recall_macro;
  j["recall_micro"] = m.recall_micro;
  j["f1_macro"] = m.f1_macro;
  j["f1_micro"] = m.f1_micro;
  j["mean_iou"] = m.mean_iou;
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json per_class = nlohmann::json::object();
  for (ClassId c : kAllClasses) {
    const ClassMetrics& cm = m.per_class[index_of(c)];
    per_class[std::string(class_name(c))] = {
        {"accuracy", cm.accuracy}, {"precision", opt(cm.precision)},
        {"recall", opt(cm.recall)}, {"f1", opt(cm.f1)}, {"iou", opt(cm.iou)}};
  }
  j["per_class"] = per_class;
  nlohmann::json included = nlohmann::json::array();
  for (ClassId c : m.classes_included) included.push_back(class_name(c));
  j["classes_included"] = included;
  j["undefined"] = m.undefined;
  return j;
}

nlohmann::json counts_json(const ConfusionCounts& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (ClassId c : kAllClasses) {
    j[std::string(class_name(c))] = {{"tp", counts.tp(c)},
                                     {"fp", counts.fp(c)},
                                     {"fn", counts.fn(c)},
                                     {"tn", counts.tn(c)}};
  }
  return j;
}

}  // namespace

std::string format_report(const RunReport& report) {
  const MetricsReport& m = report.pooled;
  std::ostringstream out;
  auto row = [&](const std::string& label, const std::string& value) {
    out << label << std::string(label.size() < 30 ? 30 - label.size() : 1, ' ')
        << value << '\n';
  };
  row("Images", std::to_string(report.images.size()));
  row("Pixels", std::to_string(report.counts.total()));
  row("Accuracy (%)", fixed(100.0 * m.global_accuracy, 2));
  out << "Per-Object Accuracies (%)\n";
  for (ClassId c : kTableOrder) {
    row("  " + title_case(class_name(c)),
        fixed(100.0 * m.per_class[index_of(c)].accuracy, 2));
  }
  row("Precision (macro)", fixed(m.precision_macro, 3));
  row("Precision (micro)", fixed(m.precision_micro, 3));
  row("Recall (macro)", fixed(m.recall_macro, 3));
  row("Recall (micro)", fixed(m.recall_micro, 3));
  row("F1 (macro)", fixed(m.f1_macro, 3));
  row("F1 (micro)", fixed(m.f1_micro, 3));
  row("mIoU", fixed(m.mean_iou, 3));
  out << "Per-Class IoU\n";
  for (ClassId c : kTableOrder) {
    const auto& iou = m.per_class[index_of(c)].iou;
    row("  " + title_case(class_name(c)), iou ? fixed(*iou, 3) : "n/a");
  }
  std::string included;
  for (ClassId c : m.classes_included) {
    if (!included.empty()) included += ",";
    included += class_name(c);
  }
  row("Classes averaged", included);
  row("Off-palette (> " + fixed(report.drift_threshold, 0) + ") (%)",
      fixed(100.0 * report.off_palette_fraction, 2));
  if (!m.undefined.empty()) {
    std::string undef;
    for (const auto& u : m.undefined) undef += (undef.empty() ? "" : ",") + u;
    row("Undefined (0/0)", undef);
  }
  return out.str();
}

std::string report_json(const RunReport& report) {
  nlohmann::json j;
  j["pooled"] = metrics_json(report.pooled);
  j["counts"] = counts_json(report.counts);
  j["pixels"] = report.counts.total();
  j["off_palette_fraction"] = report.off_palette_fraction;
  j["drift_threshold"] = report.drift_threshold;
  nlohmann::json images = nlohmann::json::array();
  for (const auto& img : report.images) {
    nlohmann::json e;
    e["name"] = img.name;
    e["pixels"] = img.counts.total();
    e["off_palette_fraction"] = img.off_palette_fraction;
    e["metrics"] = img.metrics ? metrics_json(*img.metrics) : nullptr;
    images.push_back(std::move(e));
  }
  j["images"] = images;
  return j.dump(2) + "\n";
}

}  // namespace bimsynth
