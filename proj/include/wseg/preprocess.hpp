#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wseg/parallel.hpp"
#include "wseg/raster.hpp"

namespace wseg {

class NonPositiveSigma : public std::invalid_argument
{
public:
  NonPositiveSigma()
  : std::invalid_argument("gaussian sigma must be positive") {}
};

/**
 * Sampled 1-D Gaussian of radius ceil(3 * sigma), normalized to unit sum.
 * The result has 2 * radius + 1 symmetric taps.
 */
inline std::vector<double> gaussian_kernel(double sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw NonPositiveSigma();
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  const double denom = 2.0 * sigma * sigma;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-static_cast<double>(i) * i / denom);
  }
  // Sum symmetric pairs from the tails inward so both halves round identically.
  double sum = taps[radius];
  for (int i = radius; i >= 1; --i) {
    sum += taps[radius - i] + taps[radius + i];
  }
  for (double & t : taps) {
    t /= sum;
  }
  return taps;
}

namespace detail {

inline std::uint8_t round_to_byte(double v)
{
  const double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace detail

/**
 * Separable Gaussian smoothing with edge replication. The horizontal pass
 * writes real-valued intermediates; the vertical pass rounds half up and
 * clamps. Rows (then columns) are split across `threads` workers; every
 * output is computed with the same fixed tap order, so the result does not
 * depend on the worker count.
 */
inline GrayImage gaussian_blur(const GrayImage & img, double sigma, unsigned threads = 1)
{
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = img.width();
  const int h = img.height();

  Raster<double> horizontal(w, h);
  parallel_for(
    static_cast<std::size_t>(h), threads, [&](std::size_t yi) {
      const int y = static_cast<int>(yi);
      const auto * src = img.row(y);
      double * dst = horizontal.row(y);
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int sx = std::clamp(x + k, 0, w - 1);
          acc += kernel[k + radius] * src[sx];
        }
        dst[x] = acc;
      }
    });

  GrayImage out(w, h);
  parallel_for(
    static_cast<std::size_t>(w), threads, [&](std::size_t xi) {
      const int x = static_cast<int>(xi);
      for (int y = 0; y < h; ++y) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int sy = std::clamp(y + k, 0, h - 1);
          acc += kernel[k + radius] * horizontal.at(x, sy);
        }
        out.at(x, y) = detail::round_to_byte(acc);
      }
    });
  return out;
}

using Histogram = std::array<std::uint64_t, 256>;

inline Histogram histogram(const GrayImage & img)
{
  Histogram hist{};
  for (std::uint8_t v : img.data()) {
    ++hist[v];
  }
  return hist;
}

/**
 * Otsu's threshold t in [1, 255]: the dark class is {v < t}. Returns 0 when
 * only one histogram bin is occupied (no split exists). Ties go to the lower t.
 */
inline int otsu_threshold(const Histogram & hist)
{
  std::uint64_t total = 0;
  double total_sum = 0.0;
  int occupied = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    total_sum += static_cast<double>(v) * static_cast<double>(hist[v]);
    occupied += hist[v] != 0;
  }
  if (occupied <= 1) {
    return 0;
  }

  // Between-class variance scaled by total^2:
  //   (total * sum_dark - total_sum * n_dark)^2 / (n_dark * n_light)
  // evaluated in long double so near-equal candidates compare stably.
  int best_t = 0;
  long double best = -1.0L;
  std::uint64_t n_dark = 0;
  long double sum_dark = 0.0L;
  for (int t = 1; t < 256; ++t) {
    n_dark += hist[t - 1];
    sum_dark += static_cast<long double>(t - 1) * hist[t - 1];
    const std::uint64_t n_light = total - n_dark;
    if (n_dark == 0 || n_light == 0) {
      continue;
    }
    const long double diff = static_cast<long double>(total) * sum_dark -
      static_cast<long double>(total_sum) * n_dark;
    const long double score = diff * diff / (static_cast<long double>(n_dark) * n_light);
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

/// Ink = pixels strictly darker than `threshold`.
inline InkMask binarize_fixed(const GrayImage & img, int threshold)
{
  InkMask mask(img.width(), img.height());
  std::transform(
    img.data().begin(), img.data().end(), mask.data().begin(),
    [threshold](std::uint8_t v) {return static_cast<std::uint8_t>(v < threshold);});
  return mask;
}

/// Global Otsu binarization for dark handwriting on a light page.
inline InkMask binarize_otsu(const GrayImage & img)
{
  return binarize_fixed(img, otsu_threshold(histogram(img)));
}

}  // namespace wseg
