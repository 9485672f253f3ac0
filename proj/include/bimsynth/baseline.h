#ifndef BIMSYNTH_BASELINE_H_
#define BIMSYNTH_BASELINE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "bimsynth/dataset.h"
#include "bimsynth/image.h"
#include "bimsynth/palette.h"

namespace bimsynth {

// Per-pixel feature: (r, g, b) in [0,1] after optional box averaging, then
// pixel-center position normalized by the image size.
inline constexpr int kFeatureDim = 5;
using Feature = std::array<double, kFeatureDim>;

struct Centroid {
  Feature mean{};
  std::uint64_t count = 0;
};

// Nearest-centroid pixel classifier over (color, position) features.
struct BaselineModel {
  int k = 1;  // box-average radius is k - 1 pixels; k = 1 disables it
  ClassPalette palette = default_palette();
  std::array<std::optional<Centroid>, kNumClasses> centroids;

  // Centroid color in 0..255 units.
  std::array<double, 3> centroid_rgb(ClassId c) const;
};

// Order-independent sums; partial accumulators merge by addition.
class BaselineTrainer {
 public:
  BaselineTrainer(const ClassPalette& palette, int k);

  // Adds every pixel of `photo`, labeled by the palette decoding of `label`.
  void add(const Image& photo, const Image& label);
  void add_composite(const Image& composite);
  void merge(const BaselineTrainer& other);

  // Throws kEmptyInput if no pixel was added.
  BaselineModel finish() const;

 private:
  ClassPalette palette_;
  int k_;
  std::array<Feature, kNumClasses> sums_{};
  std::array<std::uint64_t, kNumClasses> counts_{};
};

// Features of every pixel in row-major order.
std::vector<Feature> pixel_features(const Image& photo, int k);

// Trains on every train-split composite of a dataset rooted at `root`.
BaselineModel train_baseline(const DatasetManifest& manifest,
                             const std::filesystem::path& root, int k = 1,
                             int workers = 1);

// Nearest centroid by Euclidean feature distance; ties go to the lower
// ClassId. Output holds palette colors only.
LabelMap predict_labels(const BaselineModel& model, const Image& photo);
Image predict(const BaselineModel& model, const Image& photo);

void save_model(const BaselineModel& model, const std::filesystem::path& path);
BaselineModel load_model(const std::filesystem::path& path);

}  // namespace bimsynth

#endif  // BIMSYNTH_BASELINE_H_
