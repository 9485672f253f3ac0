#include "bimsynth/palette.h"

#include <limits>

#include "bimsynth/error.h"

namespace bimsynth {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kUnknownClass: return "unknown class";
    case ErrorCode::kMissingFile: return "missing file";
    case ErrorCode::kDegenerateGeometry: return "degenerate geometry";
    case ErrorCode::kDegenerateConfiguration: return "degenerate configuration";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kEmptyCameraRig: return "empty camera rig";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kUnmatchedFiles: return "unmatched files";
    case ErrorCode::kAlreadyExists: return "already exists";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kEmptyInput: return "empty input";
  }
  return "error";
}

namespace {

constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "background", "wall", "window", "door", "column", "roof"};

}  // namespace

std::string_view class_name(ClassId c) { return kClassNames[index_of(c)]; }

ClassId parse_class_name(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kClassNames[i] == name) return static_cast<ClassId>(i);
  }
  throw Error(ErrorCode::kUnknownClass,
              "unknown class \"" + std::string(name) + "\"");
}

ClassPalette::ClassPalette(const std::array<Rgb, kNumClasses>& colors)
    : colors_(colors) {
  for (int i = 0; i < kNumClasses; ++i) {
    for (int j = i + 1; j < kNumClasses; ++j) {
      if (colors_[i] == colors_[j]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "palette colors for " + std::string(kClassNames[i]) +
                        " and " + std::string(kClassNames[j]) +
                        " are identical");
      }
    }
  }
}

std::optional<ClassId> ClassPalette::decode(Rgb rgb) const {
  for (int i = 0; i < kNumClasses; ++i) {
    if (colors_[i] == rgb) return static_cast<ClassId>(i);
  }
  return std::nullopt;
}

ClassId ClassPalette::nearest(Rgb rgb) const {
  int best = 0;
  int best_d = std::numeric_limits<int>::max();
  for (int i = 0; i < kNumClasses; ++i) {
    const int d = squared_distance(rgb, colors_[i]);
    if (d < best_d) {  // strict: earlier (lower) ids keep ties
      best_d = d;
      best = i;
    }
  }
  return static_cast<ClassId>(best);
}

int ClassPalette::nearest_squared_distance(Rgb rgb) const {
  return squared_distance(rgb, color(nearest(rgb)));
}

ClassPalette default_palette() {
  return ClassPalette({{
      {0, 0, 0},      // background
      {0, 0, 255},    // wall
      {0, 255, 255},  // window
      {128, 0, 128},  // door
      {255, 0, 0},    // column
      {0, 255, 0},    // roof
  }});
}

}  // namespace bimsynth
