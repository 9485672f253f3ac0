#ifndef BIMSYNTH_DATASET_H_
#define BIMSYNTH_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bimsynth/camera.h"
#include "bimsynth/image.h"
#include "bimsynth/render.h"
#include "bimsynth/scene.h"

namespace bimsynth {

inline constexpr int kDefaultCompositeSide = 256;
inline constexpr int kMinCompositeSide = 8;

enum class Split { kTrain, kVal, kTest };

const char* split_name(Split s);
Split parse_split(const std::string& name);

struct SplitFractions {
  double train = 0.9;
  double val = 0.05;
  double test = 0.05;
};

// Each fraction >= 0 and the three sum to 1 within 1e-9.
void validate_fractions(const SplitFractions& f);

struct DatasetEntry {
  std::string file;  // relative to the dataset root, e.g. "train/s000_v000.png"
  int view_id = 0;
  int state_id = 0;
  Split split = Split::kTrain;

  friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  ClassPalette palette = default_palette();
  int image_size = kDefaultCompositeSide;
  int render_width = 0;
  int render_height = 0;
  std::uint64_t seed = 0;
  SplitFractions fractions;

  std::vector<DatasetEntry> entries_in(Split s) const;
};

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

// "s{state:03}_v{view:03}.png"
std::string composite_name(int state_id, int view_id);

// Left: photoreal resized bilinearly to side x side. Right: label resized
// with nearest neighbor, then every pixel snapped to its nearest palette color.
Image pack_images(const Image& photoreal, const Image& label,
                  int side = kDefaultCompositeSide,
                  const ClassPalette& palette = default_palette());
Image pack_pair(const RenderPair& pair, int side = kDefaultCompositeSide,
                const ClassPalette& palette = default_palette());

// Splits a composite into its left and right halves. Throws for odd widths.
std::pair<Image, Image> unpack_composite(const Image& composite);

// Assigns every view to one split: views are sorted, shuffled with a seeded
// Fisher-Yates (mt19937_64 with rejection sampling, so results are identical
// across standard libraries), then cut by largest-remainder rounding.
std::map<int, Split> assign_splits(std::vector<int> view_ids,
                                   const SplitFractions& fractions,
                                   std::uint64_t seed);

struct BuildOptions {
  int render_width = 64;
  int render_height = 64;
  int side = kDefaultCompositeSide;
  SplitFractions fractions;
  std::uint64_t seed = 0;
  bool force = false;  // replace an existing dataset in out_dir
  RenderOptions render;
  int workers = 1;  // pairs rendered and packed in parallel
};

// Renders every (view, state), packs composites into
// <out>/{train,val,test}/s###_v###.png and writes <out>/manifest. Output is
// byte-identical for a fixed configuration and seed.
DatasetManifest build_dataset(const SemanticScene& scene,
                              const std::vector<CameraPose>& poses,
                              const std::vector<SceneState>& states,
                              const std::filesystem::path& out_dir,
                              const BuildOptions& opts);

// Packs externally rendered pairs: every PNG in `photo_dir` with a namesake
// in `label_dir` becomes a composite of the same name in `out_dir`.
// Returns the number of composites written.
std::size_t pack_directories(const std::filesystem::path& photo_dir,
                             const std::filesystem::path& label_dir,
                             const std::filesystem::path& out_dir, int side,
                             int workers = 1,
                             const ClassPalette& palette = default_palette());

}  // namespace bimsynth

#endif  // BIMSYNTH_DATASET_H_
