#ifndef BIMSYNTH_SEG_EVAL_H_
#define BIMSYNTH_SEG_EVAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bimsynth/image.h"
#include "bimsynth/palette.h"

namespace bimsynth {

// Snaps every pixel to the class with the nearest palette color (Euclidean
// RGB, ties to the lower ClassId). Exact on palette-pure images.
LabelMap quantize(const Image& img, const ClassPalette& palette);

inline constexpr double kDefaultDriftThreshold = 64.0;

// Pixels to evaluate; a pixel is counted iff its entry is nonzero.
struct PixelMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> include;

  // Black pixels are excluded, anything else is included.
  static PixelMask from_image(const Image& img);
};

// Number of pixels whose distance to the nearest palette color exceeds
// `threshold`, among the pixels selected by `mask` (all when null).
std::uint64_t count_off_palette(const Image& img, const ClassPalette& palette,
                                double threshold,
                                const PixelMask* mask = nullptr);

// Multi-class confusion matrix from which every per-class binary tally
// (tp, fp, fn, tn) is derived. Merging is integer addition.
class ConfusionCounts {
 public:
  void add(ClassId gt, ClassId pred, std::uint64_t n = 1) {
    matrix_[index_of(gt)][index_of(pred)] += n;
    total_ += n;
  }
  ConfusionCounts& operator+=(const ConfusionCounts& other);

  std::uint64_t total() const { return total_; }
  std::uint64_t correct() const;
  std::uint64_t cell(ClassId gt, ClassId pred) const {
    return matrix_[index_of(gt)][index_of(pred)];
  }

  std::uint64_t tp(ClassId c) const { return cell(c, c); }
  std::uint64_t fp(ClassId c) const;  // predicted c, truth differs
  std::uint64_t fn(ClassId c) const;  // truth c, predicted otherwise
  std::uint64_t tn(ClassId c) const { return total_ - tp(c) - fp(c) - fn(c); }

  // Appears in ground truth or prediction.
  bool present(ClassId c) const { return tp(c) + fp(c) + fn(c) > 0; }

  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;

 private:
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> matrix_{};
  std::uint64_t total_ = 0;
};

// Throws kDimensionMismatch if gt, pred (and mask) sizes differ.
ConfusionCounts confusion(const LabelMap& gt, const LabelMap& pred,
                          const PixelMask* mask = nullptr);

struct ClassMetrics {
  double accuracy = 0.0;  // (tp + tn) / total
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> iou;
};

struct MetricsOptions {
  // Average over all six classes instead of those present in gt or pred;
  // undefined ratios then count as 0 instead of being skipped.
  bool all_classes = false;
};

struct MetricsReport {
  double global_accuracy = 0.0;
  std::array<ClassMetrics, kNumClasses> per_class;
  double precision_macro = 0.0;
  double precision_micro = 0.0;
  double recall_macro = 0.0;
  double recall_micro = 0.0;
  double f1_macro = 0.0;
  double f1_micro = 0.0;
  double mean_iou = 0.0;
  std::vector<ClassId> classes_included;
  std::vector<std::string> undefined;  // "<class>.<metric>" entries (0/0)
};

// Throws kEmptyInput when no pixel was counted.
MetricsReport metrics(const ConfusionCounts& counts,
                      const MetricsOptions& opts = {});

struct ImageReport {
  std::string name;
  ConfusionCounts counts;
  std::optional<MetricsReport> metrics;  // empty if the mask removed all
  double off_palette_fraction = 0.0;
};

struct RunReport {
  ConfusionCounts counts;
  MetricsReport pooled;
  std::vector<ImageReport> images;
  double off_palette_fraction = 0.0;
  double drift_threshold = kDefaultDriftThreshold;
};

struct EvalOptions {
  MetricsOptions metrics;
  std::optional<std::filesystem::path> mask_dir;
  double drift_threshold = kDefaultDriftThreshold;
  int workers = 1;
};

// Pairs PNG files by name across the two directories, quantizes both sides,
// pools one confusion matrix, and reports pooled plus per-image metrics.
// Throws kUnmatchedFiles when a file has no counterpart and kEmptyInput when
// no pair exists.
RunReport evaluate_run(const std::filesystem::path& pred_dir,
                       const std::filesystem::path& gt_dir,
                       const ClassPalette& palette,
                       const EvalOptions& opts = {});

// Same as evaluate_run over in-memory images (names are informational).
RunReport evaluate_images(const std::vector<std::string>& names,
                          const std::vector<Image>& preds,
                          const std::vector<Image>& gts,
                          const ClassPalette& palette,
                          const EvalOptions& opts = {},
                          const std::vector<PixelMask>* masks = nullptr);

// Human-readable table: global accuracy, per-object accuracies, precision,
// recall, F1 (macro and micro), mIoU, off-palette drift.
std::string format_report(const RunReport& report);

// Machine-readable JSON with the same content plus per-image entries.
std::string report_json(const RunReport& report);

}  // namespace bimsynth

#endif  // BIMSYNTH_SEG_EVAL_H_
