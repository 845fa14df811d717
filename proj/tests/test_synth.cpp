#include <gtest/gtest.h>

#include <algorithm>

#include "wseg/synth.hpp"

using namespace wseg;

TEST(XorShift64Star, KnownOutputStreams)
{
  const std::pair<std::uint64_t, std::array<std::uint64_t, 3>> vectors[] = {
    {0, {0x7bbcb40d550682d0ull, 0xde7fe413d00cc9fdull, 0xb3c638353c668c91ull}},
    {1, {0x4b46a55df3611b9bull, 0xd7e1f1410e763ef4ull, 0x5f14ec66975f9b06ull}},
    {42, {0x31b0ece7c4f697a2ull, 0x9008a3b1cb686f03ull, 0x7c7173abd97be16full}},
  };
  for (const auto & [seed, expect] : vectors) {
    XorShift64Star rng(seed);
    for (std::uint64_t v : expect) {
      EXPECT_EQ(rng.next(), v) << "seed " << seed;
    }
  }
}

TEST(XorShift64Star, UniformStaysInRange)
{
  XorShift64Star rng(9);
  bool saw_lo = false, saw_hi = false;
  for (int i = 0; i < 2000; ++i) {
    const int v = rng.uniform(-3, 4);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 4);
    saw_lo |= v == -3;
    saw_hi |= v == 4;
    const double u = rng.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_TRUE(saw_lo && saw_hi);
  EXPECT_EQ(rng.uniform(5, 5), 5);
}

TEST(SynthPage, SameSeedSamePage)
{
  SynthSpec spec;
  spec.seed = 12;
  const SynthPage a = synth_page(spec);
  const SynthPage b = synth_page(spec);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.truth, b.truth);
  spec.seed = 13;
  EXPECT_NE(synth_page(spec).image, a.image);
}

TEST(SynthPage, OnePixelPageWithoutLines)
{
  SynthSpec spec;
  spec.page_width = 1;
  spec.page_height = 1;
  spec.margin = 0;
  spec.lines = 0;
  spec.noise_salt_prob = 0.0;
  const SynthPage p = synth_page(spec);
  EXPECT_EQ(p.image, GrayImage(1, 1, 255));
  EXPECT_TRUE(p.truth.empty());
}

TEST(SynthPage, CleanLayoutHasDisjointWellSeparatedWords)
{
  SynthSpec spec;
  spec.lines = 3;
  spec.words_per_line = {5, 5};
  spec.jitter = 0;
  spec.noise_salt_prob = 0.0;
  spec.seed = 5;
  const SynthPage p = synth_page(spec);
  ASSERT_EQ(p.truth.size(), 15u);
  for (std::size_t i = 0; i < p.truth.size(); ++i) {
    for (std::size_t j = i + 1; j < p.truth.size(); ++j) {
      EXPECT_EQ(intersection_area(p.truth[i], p.truth[j]), 0);
    }
    if (i % 5 != 0) {
      EXPECT_GE(p.truth[i].x - p.truth[i - 1].right(), spec.inter_word_gap.lo);
    }
  }
  // Truth boxes are tight around the drawn ink.
  for (const Box & b : p.truth) {
    InkMask ink(b.w, b.h);
    for (int y = 0; y < b.h; ++y) {
      for (int x = 0; x < b.w; ++x) {
        ink.at(x, y) = p.image.at(b.x + x, b.y + y) < 255;
      }
    }
    EXPECT_EQ(tight_box(ink), (Box{0, 0, b.w, b.h}));
  }
  // No ink outside the truth boxes.
  std::size_t inside = 0;
  for (const Box & b : p.truth) {
    for (int y = b.y; y < b.bottom(); ++y) {
      for (int x = b.x; x < b.right(); ++x) {
        inside += p.image.at(x, y) < 255;
      }
    }
  }
  EXPECT_EQ(inside, static_cast<std::size_t>(
      std::count_if(p.image.data().begin(), p.image.data().end(), [](auto v) {return v < 255;})));
}

TEST(SynthPage, OverflowIsReported)
{
  SynthSpec spec;
  spec.lines = 40;
  EXPECT_THROW(synth_page(spec), LayoutOverflow);
  spec.lines = 1;
  spec.words_per_line = {200, 200};
  EXPECT_THROW(synth_page(spec), LayoutOverflow);
}

TEST(SynthPage, InvalidSpecIsRejected)
{
  SynthSpec spec;
  spec.intra_word_gap = {1, 20};
  EXPECT_THROW(synth_page(spec), std::invalid_argument);
  spec = SynthSpec{};
  spec.char_size = {5, 3};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = SynthSpec{};
  spec.noise_salt_prob = 1.5;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(SynthSettings, KeysMapToFields)
{
  const SynthSpec s = apply_synth_settings(
    SynthSpec{}, KeyValues::parse(
      "page_width = 800\nlines = 3\nwords_per_line = 4 6\njitter = 0\n"
      "noise_salt_prob = 0\nseed = 99\nchar_size = 9\n"));
  EXPECT_EQ(s.page_width, 800);
  EXPECT_EQ(s.lines, 3);
  EXPECT_EQ(s.words_per_line, (IntRange{4, 6}));
  EXPECT_EQ(s.char_size, (IntRange{9, 9}));
  EXPECT_EQ(s.seed, 99u);
  EXPECT_EQ(s.noise_salt_prob, 0.0);
  EXPECT_THROW(apply_synth_settings(SynthSpec{}, KeyValues::parse("colour = red\n")), std::invalid_argument);
}
