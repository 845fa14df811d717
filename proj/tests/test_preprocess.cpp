#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "wseg/preprocess.hpp"

using namespace wseg;

TEST(GaussianKernel, NearDeltaForTinySigma)
{
  const auto k = gaussian_kernel(0.1);
  ASSERT_EQ(k.size(), 3u);
  EXPECT_GT(k[1], 0.999);
  EXPECT_LT(k[0], 1e-6);
  EXPECT_EQ(k[0], k[2]);
}

TEST(GaussianKernel, SumsToOneAndIsSymmetric)
{
  for (double sigma : {0.3, 0.5, 1.0, 1.7, 2.0, 4.0, 9.5}) {
    const auto k = gaussian_kernel(sigma);
    EXPECT_EQ(k.size(), 2 * static_cast<std::size_t>(std::ceil(3 * sigma)) + 1);
    EXPECT_NEAR(std::accumulate(k.begin(), k.end(), 0.0), 1.0, 1e-9) << sigma;
    for (std::size_t i = 0; i < k.size(); ++i) {
      EXPECT_EQ(k[i], k[k.size() - 1 - i]);
    }
  }
}

TEST(GaussianKernel, SigmaOneMatchesHandComputedTaps)
{
  // exp(-i^2/2) for i = 0..3 normalized over the 7 taps (sum 2.5059...).
  const auto k = gaussian_kernel(1.0);
  ASSERT_EQ(k.size(), 7u);
  EXPECT_NEAR(k[3], 0.3990502796524549, 1e-12);
  EXPECT_NEAR(k[2], 0.2420362293761143, 1e-12);
  EXPECT_NEAR(k[1], 0.054005582622414484, 1e-12);
  EXPECT_NEAR(k[0], 0.004433048175243745, 1e-12);
}

TEST(GaussianKernel, RejectsNonPositiveSigma)
{
  EXPECT_THROW(gaussian_kernel(0.0), NonPositiveSigma);
  EXPECT_THROW(gaussian_kernel(-1.0), NonPositiveSigma);
  EXPECT_THROW(gaussian_blur(GrayImage(2, 2), 0.0), NonPositiveSigma);
}

TEST(GaussianBlur, ConstantImageIsUnchanged)
{
  for (int v : {0, 1, 77, 254, 255}) {
    const GrayImage img(13, 9, static_cast<std::uint8_t>(v));
    EXPECT_EQ(gaussian_blur(img, 1.3), img);
    EXPECT_EQ(gaussian_blur(gaussian_blur(img, 2.0), 2.0), img);
  }
}

TEST(GaussianBlur, ImpulseResponseIsScaledOuterProduct)
{
  GrayImage img(21, 21, 0);
  img.at(10, 10) = 255;
  const auto k = gaussian_kernel(1.0);
  const GrayImage out = gaussian_blur(img, 1.0);
  for (int y = 0; y < 21; ++y) {
    for (int x = 0; x < 21; ++x) {
      const int dx = x - 10, dy = y - 10;
      double expect = 0.0;
      if (std::abs(dx) <= 3 && std::abs(dy) <= 3) {
        expect = 255.0 * k[dx + 3] * k[dy + 3];
      }
      EXPECT_EQ(out.at(x, y), static_cast<int>(std::floor(expect + 0.5))) << x << "," << y;
    }
  }
}

TEST(GaussianBlur, MatchesDirect2DConvolution)
{
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const GrayImage img = wseg::testing::random_gray(rng, 32, 32);
    const GrayImage fast = gaussian_blur(img, 1.5);
    const GrayImage ref = wseg::testing::convolve_2d(img, 1.5);
    for (std::size_t i = 0; i < img.size(); ++i) {
      ASSERT_LE(std::abs(fast.data()[i] - ref.data()[i]), 1) << "pixel " << i;
    }
  }
}

TEST(GaussianBlur, CommutesWithHorizontalMirror)
{
  std::mt19937_64 rng(4);
  const GrayImage img = wseg::testing::random_gray(rng, 31, 17);
  auto mirror = [](const GrayImage & g) {
      GrayImage m(g.width(), g.height());
      for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
          m.at(g.width() - 1 - x, y) = g.at(x, y);
        }
      }
      return m;
    };
  EXPECT_EQ(gaussian_blur(mirror(img), 1.2), mirror(gaussian_blur(img, 1.2)));
}

TEST(GaussianBlur, WorkerCountDoesNotChangeOutput)
{
  std::mt19937_64 rng(8);
  const GrayImage img = wseg::testing::random_gray(rng, 67, 45);
  const GrayImage one = gaussian_blur(img, 2.0, 1);
  EXPECT_EQ(gaussian_blur(img, 2.0, 3), one);
  EXPECT_EQ(gaussian_blur(img, 2.0, 8), one);
}

TEST(GaussianBlur, EdgesReplicateInsteadOfDarkening)
{
  // A white page must stay white at its margins (zero padding would darken them).
  const GrayImage out = gaussian_blur(GrayImage(5, 5, 255), 3.0);
  EXPECT_EQ(out.at(0, 0), 255);
}

TEST(Otsu, PerfectlyBimodalSplitsTheModes)
{
  GrayImage img(10, 10, 255);
  for (int i = 0; i < 40; ++i) {
    img.data()[i * 2 + (i >= 25)] = 0;
  }
  const InkMask ink = binarize_otsu(img);
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_EQ(ink.data()[i] != 0, img.data()[i] == 0);
  }
}

TEST(Otsu, ConstantImageHasNoInk)
{
  for (int v : {0, 128, 255}) {
    const InkMask ink = binarize_otsu(GrayImage(7, 3, static_cast<std::uint8_t>(v)));
    EXPECT_EQ(count_ink(ink), 0u);
  }
}

TEST(Otsu, GaussianMixtureThresholdAgreesWithExhaustiveScan)
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::normal_distribution<double> dark(60, 15), light(200, 15);
    std::bernoulli_distribution pick_dark(0.3);
    GrayImage img(64, 64);
    for (auto & v : img.data()) {
      const double s = pick_dark(rng) ? dark(rng) : light(rng);
      v = static_cast<std::uint8_t>(std::clamp(std::lround(s), 0L, 255L));
    }
    const int t = otsu_threshold(histogram(img));
    EXPECT_GE(t, 100);
    EXPECT_LE(t, 170);
    EXPECT_EQ(t, wseg::testing::otsu_scan(img));
  }
}

TEST(Otsu, ThresholdAgreesWithScanOnRandomImages)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = wseg::testing::random_gray(rng, 16, 16);
    EXPECT_EQ(otsu_threshold(histogram(img)), wseg::testing::otsu_scan(img));
  }
}

TEST(Binarize, FixedThresholdIsStrict)
{
  const GrayImage img(3, 1, std::vector<std::uint8_t>{99, 100, 101});
  const InkMask ink = binarize_fixed(img, 100);
  EXPECT_EQ(ink.data(), (std::vector<std::uint8_t>{1, 0, 0}));
}
