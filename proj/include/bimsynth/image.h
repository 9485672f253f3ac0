#ifndef BIMSYNTH_IMAGE_H_
#define BIMSYNTH_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "bimsynth/palette.h"

namespace bimsynth {

// Row-major 8-bit RGB image.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const {
    const std::size_t i = offset(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = offset(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }

  const std::vector<std::uint8_t>& bytes() const { return data_; }
  std::vector<std::uint8_t>& bytes() { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Row-major per-pixel class ids. The renderer emits it as the ground-truth
// id buffer; evaluation uses the same type for decoded label maps.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, ClassId fill = ClassId::kBackground)
      : width_(width),
        height_(height),
        ids_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return ids_.size(); }

  ClassId at(int x, int y) const { return ids_[index(x, y)]; }
  void set(int x, int y, ClassId c) { ids_[index(x, y)] = c; }
  ClassId operator[](std::size_t i) const { return ids_[i]; }
  ClassId& operator[](std::size_t i) { return ids_[i]; }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<ClassId> ids_;
};

using IdBuffer = LabelMap;

// Pixel-center aligned bilinear resampling, rounded half-up. Same-size
// resampling is the identity.
Image resize_bilinear(const Image& src, int width, int height);

// Pixel-center aligned nearest-neighbor resampling. Never invents colors.
Image resize_nearest(const Image& src, int width, int height);

Image crop(const Image& src, int x0, int y0, int width, int height);

// Places `left` and `right` side by side; heights must match.
Image hstack(const Image& left, const Image& right);

// Paints each pixel with its class color.
Image colorize(const LabelMap& labels, const ClassPalette& palette);

// Lossless 8-bit RGB PNG. Any PNG color type is converted to RGB8 on read.
void write_png(const Image& img, const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);

}  // namespace bimsynth

#endif  // BIMSYNTH_IMAGE_H_
