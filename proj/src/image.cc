#include "bimsynth/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "bimsynth/error.h"

namespace bimsynth {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image dimensions");
  }
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

namespace {

void require_target(const Image& src, int width, int height) {
  if (src.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot resize an empty image");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "resize target must be positive");
  }
}

// Source coordinate of destination pixel center `d`, in source pixel-center
// units, clamped to the valid sample range.
double source_coord(int d, int src_len, int dst_len) {
  const double s = (d + 0.5) * src_len / dst_len - 0.5;
  return std::clamp(s, 0.0, static_cast<double>(src_len - 1));
}

}  // namespace

Image resize_bilinear(const Image& src, int width, int height) {
  require_target(src, width, height);
  if (width == src.width() && height == src.height()) return src;
  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    const double sy = source_coord(y, src.height(), height);
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double fy = sy - y0;
    for (int x = 0; x < width; ++x) {
      const double sx = source_coord(x, src.width(), width);
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const double fx = sx - x0;
      const Rgb c00 = src.at(x0, y0), c10 = src.at(x1, y0);
      const Rgb c01 = src.at(x0, y1), c11 = src.at(x1, y1);
      auto mix = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c,
                     std::uint8_t d) {
        const double top = a + (b - a) * fx;
        const double bottom = c + (d - c) * fx;
        const double v = top + (bottom - top) * fy;
        return static_cast<std::uint8_t>(
            std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      };
      out.set(x, y,
              {mix(c00.r, c10.r, c01.r, c11.r), mix(c00.g, c10.g, c01.g, c11.g),
               mix(c00.b, c10.b, c01.b, c11.b)});
    }
  }
  return out;
}

Image resize_nearest(const Image& src, int width, int height) {
  require_target(src, width, height);
  if (width == src.width() && height == src.height()) return src;
  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(
        static_cast<int>(static_cast<long long>(2 * y + 1) * src.height() /
                         (2LL * height)),
        src.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(
          static_cast<int>(static_cast<long long>(2 * x + 1) * src.width() /
                           (2LL * width)),
          src.width() - 1);
      out.set(x, y, src.at(sx, sy));
    }
  }
  return out;
}

Image crop(const Image& src, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 0 || height < 0 ||
      x0 + width > src.width() || y0 + height > src.height()) {
    throw Error(ErrorCode::kInvalidArgument, "crop window out of bounds");
  }
  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.set(x, y, src.at(x0 + x, y0 + y));
  }
  return out;
}

Image hstack(const Image& left, const Image& right) {
  if (left.height() != right.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "hstack needs equal heights (" + std::to_string(left.height()) +
                    " vs " + std::to_string(right.height()) + ")");
  }
  Image out(left.width() + right.width(), left.height());
  for (int y = 0; y < left.height(); ++y) {
    for (int x = 0; x < left.width(); ++x) out.set(x, y, left.at(x, y));
    for (int x = 0; x < right.width(); ++x) {
      out.set(left.width() + x, y, right.at(x, y));
    }
  }
  return out;
}

Image colorize(const LabelMap& labels, const ClassPalette& palette) {
  Image out(labels.width(), labels.height());
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      out.set(x, y, palette.color(labels.at(x, y)));
    }
  }
  return out;
}

}  // namespace bimsynth
