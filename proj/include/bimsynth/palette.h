#ifndef BIMSYNTH_PALETTE_H_
#define BIMSYNTH_PALETTE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bimsynth {

// Building-object classes. The ordinal order is fixed and doubles as the
// tie-break order everywhere a "lower ClassId wins" rule applies.
enum class ClassId : std::uint8_t {
  kBackground = 0,
  kWall = 1,
  kWindow = 2,
  kDoor = 3,
  kColumn = 4,
  kRoof = 5,
};

inline constexpr int kNumClasses = 6;

inline constexpr std::array<ClassId, kNumClasses> kAllClasses = {
    ClassId::kBackground, ClassId::kWall,   ClassId::kWindow,
    ClassId::kDoor,       ClassId::kColumn, ClassId::kRoof};

constexpr int index_of(ClassId c) { return static_cast<int>(c); }

std::string_view class_name(ClassId c);

// Throws Error(kUnknownClass) for names outside the closed class set.
ClassId parse_class_name(std::string_view name);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline int squared_distance(Rgb a, Rgb b) {
  const int dr = int{a.r} - int{b.r};
  const int dg = int{a.g} - int{b.g};
  const int db = int{a.b} - int{b.b};
  return dr * dr + dg * dg + db * db;
}

// Immutable class <-> color mapping. Construction rejects duplicate colors,
// so decoding a palette color is always unambiguous.
class ClassPalette {
 public:
  explicit ClassPalette(const std::array<Rgb, kNumClasses>& colors);

  Rgb color(ClassId c) const { return colors_[index_of(c)]; }
  const std::array<Rgb, kNumClasses>& colors() const { return colors_; }

  // Exact lookup; nullopt for off-palette colors.
  std::optional<ClassId> decode(Rgb rgb) const;

  // Nearest palette color by Euclidean RGB distance, ties to the lower id.
  ClassId nearest(Rgb rgb) const;
  int nearest_squared_distance(Rgb rgb) const;

  friend bool operator==(const ClassPalette&, const ClassPalette&) = default;

 private:
  std::array<Rgb, kNumClasses> colors_;
};

// wall blue, window cyan, door purple, column red, roof green, background
// black.
ClassPalette default_palette();

}  // namespace bimsynth

#endif  // BIMSYNTH_PALETTE_H_
