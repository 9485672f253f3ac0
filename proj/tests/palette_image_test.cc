#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include "bimsynth/error.h"
#include "bimsynth/image.h"
#include "bimsynth/palette.h"
#include "test_util.h"

namespace bimsynth {
namespace {

using testing::TempDir;

TEST(Palette, DefaultColors) {
  const ClassPalette p = default_palette();
  EXPECT_EQ(p.color(ClassId::kWall), (Rgb{0, 0, 255}));
  EXPECT_EQ(p.color(ClassId::kWindow), (Rgb{0, 255, 255}));
  EXPECT_EQ(p.color(ClassId::kDoor), (Rgb{128, 0, 128}));
  EXPECT_EQ(p.color(ClassId::kColumn), (Rgb{255, 0, 0}));
  EXPECT_EQ(p.color(ClassId::kRoof), (Rgb{0, 255, 0}));
  EXPECT_EQ(p.color(ClassId::kBackground), (Rgb{0, 0, 0}));
}

TEST(Palette, DefaultEntriesDistinct) {
  std::set<std::array<int, 3>> seen;
  for (const Rgb& c : default_palette().colors()) seen.insert({c.r, c.g, c.b});
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Palette, ClassOrdinalsAndNames) {
  EXPECT_EQ(index_of(ClassId::kBackground), 0);
  EXPECT_EQ(index_of(ClassId::kWall), 1);
  EXPECT_EQ(index_of(ClassId::kWindow), 2);
  EXPECT_EQ(index_of(ClassId::kDoor), 3);
  EXPECT_EQ(index_of(ClassId::kColumn), 4);
  EXPECT_EQ(index_of(ClassId::kRoof), 5);
  for (ClassId c : kAllClasses) EXPECT_EQ(parse_class_name(class_name(c)), c);
}

TEST(Palette, UnknownClassName) {
  try {
    parse_class_name("chimney");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownClass);
  }
}

TEST(Palette, RejectsDuplicateColors) {
  auto colors = default_palette().colors();
  colors[index_of(ClassId::kRoof)] = colors[index_of(ClassId::kWall)];
  EXPECT_THROW(ClassPalette{colors}, Error);
}

TEST(Palette, DecodeExactOnly) {
  const ClassPalette p = default_palette();
  EXPECT_EQ(p.decode({0, 0, 255}), ClassId::kWall);
  EXPECT_FALSE(p.decode({0, 0, 254}).has_value());
}

TEST(Palette, NearestAndTies) {
  const ClassPalette p = default_palette();
  EXPECT_EQ(p.nearest({0, 0, 250}), ClassId::kWall);
  // exact midpoint between background and a (0,0,200) wall
  auto colors = default_palette().colors();
  colors[index_of(ClassId::kWall)] = {0, 0, 200};
  const ClassPalette q(colors);
  EXPECT_EQ(q.nearest({0, 0, 100}), ClassId::kBackground);
  EXPECT_EQ(q.nearest({0, 0, 101}), ClassId::kWall);
}

TEST(Image, BasicAccess) {
  Image img(3, 2, {1, 2, 3});
  EXPECT_EQ(img.width(), 3);
  EXPECT_EQ(img.height(), 2);
  img.set(2, 1, {9, 8, 7});
  EXPECT_EQ(img.at(2, 1), (Rgb{9, 8, 7}));
  EXPECT_EQ(img.at(0, 0), (Rgb{1, 2, 3}));
}

TEST(Image, ResizeIdentityWhenSameSize) {
  std::mt19937 rng(1);
  Image img(7, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x)
      img.set(x, y, {static_cast<std::uint8_t>(rng()),
                     static_cast<std::uint8_t>(rng()),
                     static_cast<std::uint8_t>(rng())});
  EXPECT_EQ(resize_bilinear(img, 7, 5), img);
  EXPECT_EQ(resize_nearest(img, 7, 5), img);
}

TEST(Image, NearestResizeKeepsColorSet) {
  Image img(5, 3);
  const ClassPalette p = default_palette();
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x)
      img.set(x, y, p.colors()[(x + 2 * y) % kNumClasses]);
  const Image out = resize_nearest(img, 13, 11);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      EXPECT_TRUE(p.decode(out.at(x, y)).has_value());
}

TEST(Image, NearestUpscaleByTwoReplicates) {
  Image img(2, 1);
  img.set(0, 0, {10, 10, 10});
  img.set(1, 0, {200, 200, 200});
  const Image out = resize_nearest(img, 4, 2);
  EXPECT_EQ(out.at(0, 0), (Rgb{10, 10, 10}));
  EXPECT_EQ(out.at(1, 1), (Rgb{10, 10, 10}));
  EXPECT_EQ(out.at(2, 0), (Rgb{200, 200, 200}));
  EXPECT_EQ(out.at(3, 1), (Rgb{200, 200, 200}));
}

TEST(Image, BilinearDownscaleAveragesPairs) {
  Image img(2, 2);
  img.set(0, 0, {0, 0, 0});
  img.set(1, 0, {100, 100, 100});
  img.set(0, 1, {100, 100, 100});
  img.set(1, 1, {201, 201, 201});
  const Image out = resize_bilinear(img, 1, 1);
  // center sample (1,1) -> mean 100.25 -> 100
  EXPECT_EQ(out.at(0, 0), (Rgb{100, 100, 100}));
}

TEST(Image, BilinearConstantStaysConstant) {
  Image img(9, 4, {77, 13, 250});
  const Image out = resize_bilinear(img, 31, 17);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      ASSERT_EQ(out.at(x, y), (Rgb{77, 13, 250}));
}

TEST(Image, CropAndHstack) {
  Image a(2, 2, {1, 1, 1});
  Image b(3, 2, {2, 2, 2});
  const Image s = hstack(a, b);
  EXPECT_EQ(s.width(), 5);
  EXPECT_EQ(crop(s, 0, 0, 2, 2), a);
  EXPECT_EQ(crop(s, 2, 0, 3, 2), b);
  EXPECT_THROW(hstack(a, Image(2, 3)), Error);
  EXPECT_THROW(crop(s, 4, 0, 2, 2), Error);
}

TEST(Image, ColorizeUsesPalette) {
  LabelMap lm(2, 1);
  lm.set(1, 0, ClassId::kRoof);
  const Image img = colorize(lm, default_palette());
  EXPECT_EQ(img.at(0, 0), (Rgb{0, 0, 0}));
  EXPECT_EQ(img.at(1, 0), (Rgb{0, 255, 0}));
}

TEST(Png, RoundTrip) {
  TempDir tmp;
  std::mt19937 rng(3);
  Image img(17, 9);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 17; ++x)
      img.set(x, y, {static_cast<std::uint8_t>(rng()),
                     static_cast<std::uint8_t>(rng()),
                     static_cast<std::uint8_t>(rng())});
  write_png(img, tmp / "a.png");
  EXPECT_EQ(read_png(tmp / "a.png"), img);
}

TEST(Png, MissingAndCorrupt) {
  TempDir tmp;
  try {
    read_png(tmp / "nope.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  }
  std::ofstream(tmp / "bad.png") << "not a png";
  try {
    read_png(tmp / "bad.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

}  // namespace
}  // namespace bimsynth
