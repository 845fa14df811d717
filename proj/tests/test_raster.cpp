#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "oracles.hpp"
#include "wseg/raster.hpp"

namespace fs = std::filesystem;
using namespace wseg;

namespace {

class TempDir : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
      ("wseg_raster_" + std::to_string(::getpid()) + "_" +
      ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override {fs::remove_all(dir_);}

  fs::path dir_;
};

std::string bytes(std::initializer_list<int> v)
{
  std::string s;
  for (int b : v) {
    s.push_back(static_cast<char>(b));
  }
  return s;
}

}  // namespace

TEST(LoadGray, P5PassesThrough)
{
  const GrayImage img = decode_gray("P5\n1 1\n255\n" + bytes({77}));
  EXPECT_EQ(img, GrayImage(1, 1, std::vector<std::uint8_t>{77}));
}

TEST(LoadGray, P6WhiteIsWhite)
{
  const GrayImage img = decode_gray("P6\n1 1\n255\n" + bytes({255, 255, 255}));
  EXPECT_EQ(img.at(0, 0), 255);
}

TEST(LoadGray, P6UsesRec601Luma)
{
  // 0.299*100 + 0.587*200 + 0.114*50 = 153.0
  const GrayImage img = decode_gray("P6\n1 1\n255\n" + bytes({100, 200, 50}));
  EXPECT_EQ(img.at(0, 0), 153);
}

TEST(LoadGray, P6MatchesScalarReferenceOnRandomImage)
{
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> v(0, 255);
  const int w = 37, h = 23;
  std::string file = "P6\n37 23\n255\n";
  std::vector<int> expect;
  for (int i = 0; i < w * h; ++i) {
    const int r = v(rng), g = v(rng), b = v(rng);
    file += bytes({r, g, b});
    expect.push_back(static_cast<int>(std::floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5 + 1e-9)));
  }
  const GrayImage img = decode_gray(file);
  for (int i = 0; i < w * h; ++i) {
    ASSERT_EQ(img.data()[i], expect[i]) << "pixel " << i;
  }
}

TEST(LoadGray, HeaderCommentsAreSkipped)
{
  const GrayImage img = decode_gray("P5\n# made by hand\n2 1\n255\n" + bytes({1, 2}));
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.at(1, 0), 2);
}

TEST(LoadGray, ErrorsCarryKindAndOffset)
{
  try {
    decode_gray("P3\n1 1\n255\n0");
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::MalformedHeader);
    EXPECT_EQ(e.position(), 0u);
  }
  try {
    decode_gray("P5\n1 1\n65535\n" + bytes({0, 0}));
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::UnsupportedMaxval);
    EXPECT_EQ(e.position(), 7u);
  }
  try {
    decode_gray("P5\n3 2\n255\n" + bytes({1, 2, 3}));
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::TruncatedData);
    EXPECT_EQ(e.position(), 14u);
  }
  try {
    decode_gray("P5\n0 2\n255\n");
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::MalformedHeader);
  }
  EXPECT_THROW(decode_gray("P5\nx 2\n255\n"), FormatError);
}

TEST_F(TempDir, SaveGrayWritesExactBytes)
{
  const fs::path file = dir_ / "a.pgm";
  save_gray(GrayImage(2, 1, std::vector<std::uint8_t>{0, 255}), file);
  EXPECT_EQ(detail::read_file(file), "P5\n2 1\n255\n" + bytes({0x00, 0xFF}));
}

TEST_F(TempDir, SaveLoadRoundTripsRandomImages)
{
  std::mt19937_64 rng(11);
  for (auto [w, h] : {std::pair{1, 1}, std::pair{3, 7}, std::pair{512, 512}}) {
    const GrayImage img = wseg::testing::random_gray(rng, w, h);
    const fs::path file = dir_ / "rt.pgm";
    save_gray(img, file);
    EXPECT_EQ(load_gray(file), img) << w << "x" << h;
  }
}

TEST_F(TempDir, MissingFileIsIoErrorNamingPath)
{
  const fs::path file = dir_ / "nope.pgm";
  try {
    load_gray(file);
    FAIL();
  } catch (const IoError & e) {
    EXPECT_EQ(e.path(), file);
    EXPECT_NE(std::string(e.what()).find("nope.pgm"), std::string::npos);
  }
  EXPECT_THROW(save_gray(GrayImage(1, 1), dir_ / "missing_dir" / "x.pgm"), IoError);
}

TEST(Truth, ParsesBoxesInOrder)
{
  EXPECT_EQ(parse_truth("WSGT 1\n0 0 10 5\n"), (BoxList{{0, 0, 10, 5}}));
  EXPECT_TRUE(parse_truth("WSGT 1\n").empty());
  EXPECT_EQ(parse_truth("WSGT 1\n1 2 3 4\n\n5 6 7 8\n"), (BoxList{{1, 2, 3, 4}, {5, 6, 7, 8}}));
}

TEST(Truth, RejectsWrongVersionAndBadLines)
{
  try {
    parse_truth("WSGT 2\n");
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::BadMagic);
  }
  try {
    parse_truth("WSGT 1\n0 0 1 1\n0 0 one 1\n");
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::BadLine);
    EXPECT_EQ(e.position(), 3u);
  }
  EXPECT_THROW(parse_truth("WSGT 1\n0 0 0 1\n"), FormatError);
  EXPECT_THROW(parse_truth("WSGT 1\n0 0 1 1 9\n"), FormatError);
}

TEST(Truth, FormatParseIsIdentityOnRandomLists)
{
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(-50, 5000), extent(1, 900), count(0, 40);
  for (int trial = 0; trial < 50; ++trial) {
    BoxList boxes(count(rng));
    for (auto & b : boxes) {
      b = {coord(rng), coord(rng), extent(rng), extent(rng)};
    }
    EXPECT_EQ(parse_truth(format_truth(boxes)), boxes);
  }
}

TEST(Overlay, EmptyBoxListReplicatesGray)
{
  std::mt19937_64 rng(5);
  const GrayImage g = wseg::testing::random_gray(rng, 9, 4);
  const RgbImage out = render_overlay(g, {});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = g.data()[i];
    EXPECT_EQ(out.data()[i], (Rgb{v, v, v}));
  }
}

TEST(Overlay, SmallBoxIsAllOutline)
{
  const RgbImage out = render_overlay(GrayImage(2, 2, 128), {{0, 0, 2, 2}});
  for (const Rgb & p : out.data()) {
    EXPECT_EQ(p, (Rgb{255, 0, 0}));
  }
}

TEST(Overlay, ThreeByThreeBoxHasEightRedPixels)
{
  const GrayImage g(5, 5, 128);
  const RgbImage out = render_overlay(g, {{1, 1, 3, 3}});
  int red = 0;
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      const bool on_perimeter = x >= 1 && x <= 3 && y >= 1 && y <= 3 && !(x == 2 && y == 2);
      if (out.at(x, y) == Rgb{255, 0, 0}) {
        ++red;
        EXPECT_TRUE(on_perimeter);
      } else {
        EXPECT_EQ(out.at(x, y), (Rgb{128, 128, 128}));
      }
    }
  }
  EXPECT_EQ(red, 8);
}

TEST(Overlay, NeverTouchesPixelsOffPerimeters)
{
  std::mt19937_64 rng(9);
  const GrayImage g = wseg::testing::random_gray(rng, 40, 30);
  std::uniform_int_distribution<int> xs(0, 39), ys(0, 29);
  BoxList boxes;
  for (int i = 0; i < 6; ++i) {
    const int x = xs(rng), y = ys(rng);
    boxes.push_back({x, y, std::uniform_int_distribution<int>(1, 40 - x)(rng),
        std::uniform_int_distribution<int>(1, 30 - y)(rng)});
  }
  const RgbImage out = render_overlay(g, boxes);
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 40; ++x) {
      bool perim = false;
      for (const Box & b : boxes) {
        const bool in = x >= b.x && x < b.right() && y >= b.y && y < b.bottom();
        perim = perim ||
          (in && (x == b.x || x == b.right() - 1 || y == b.y || y == b.bottom() - 1));
      }
      if (!perim) {
        const auto v = g.at(x, y);
        ASSERT_EQ(out.at(x, y), (Rgb{v, v, v}));
      }
    }
  }
}

TEST(Overlay, OutOfBoundsBoxIsReportedByIndex)
{
  try {
    render_overlay(GrayImage(4, 4), {{0, 0, 1, 1}, {3, 3, 2, 1}});
    FAIL();
  } catch (const BoxOutOfBounds & e) {
    EXPECT_EQ(e.index(), 1u);
  }
}
