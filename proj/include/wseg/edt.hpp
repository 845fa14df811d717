#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wseg/parallel.hpp"
#include "wseg/raster.hpp"

namespace wseg {

/// Squared Euclidean distance (pixel^2) from each pixel to the nearest ink pixel.
using DistanceMap = Raster<std::uint32_t, struct DistanceTag>;

/// Value of every DistanceMap pixel when the mask holds no ink at all.
inline constexpr std::uint32_t kNoInk = std::numeric_limits<std::uint32_t>::max();

namespace detail {

inline void check_edt_extent(const InkMask & mask)
{
  const std::uint64_t w = static_cast<std::uint64_t>(mask.width());
  const std::uint64_t h = static_cast<std::uint64_t>(mask.height());
  if (w * w + h * h >= kNoInk) {
    throw std::length_error("mask too large for 32-bit squared distances");
  }
}

}  // namespace detail

/// Direct minimum over all ink pixels. O(N * ink); for tests and tiny inputs.
inline DistanceMap edt_bruteforce(const InkMask & mask)
{
  detail::check_edt_extent(mask);
  std::vector<std::pair<int, int>> ink;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) {
        ink.emplace_back(x, y);
      }
    }
  }
  DistanceMap out(mask.width(), mask.height(), kNoInk);
  if (ink.empty()) {
    return out;
  }
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      std::uint32_t best = kNoInk;
      for (const auto & [qx, qy] : ink) {
        const auto dx = static_cast<std::int64_t>(x - qx);
        const auto dy = static_cast<std::int64_t>(y - qy);
        best = std::min<std::uint32_t>(best, static_cast<std::uint32_t>(dx * dx + dy * dy));
      }
      out.at(x, y) = best;
    }
  }
  return out;
}

/**
 * Exact squared EDT in two separable passes.
 *
 * Phase 1 scans every column twice to get the squared vertical distance to
 * the nearest ink pixel in that column. Phase 2 takes, for every row, the
 * lower envelope of the parabolas (x - q)^2 + f(q) over columns q with a
 * finite f(q). Breakpoints are compared by cross multiplication in 64-bit
 * integers, so the result equals edt_bruteforce bit for bit.
 */
inline DistanceMap edt_exact(const InkMask & mask, unsigned threads = 1)
{
  detail::check_edt_extent(mask);
  const int w = mask.width();
  const int h = mask.height();
  constexpr std::int64_t inf = -1;

  // Phase 1: per-column squared distance, -1 where the column has no ink.
  Raster<std::int64_t> column(w, h, inf);
  parallel_for(
    static_cast<std::size_t>(w), threads, [&](std::size_t xi) {
      const int x = static_cast<int>(xi);
      int last = -1;
      for (int y = 0; y < h; ++y) {
        if (mask.at(x, y)) {
          last = y;
        }
        if (last >= 0) {
          column.at(x, y) = static_cast<std::int64_t>(y - last) * (y - last);
        }
      }
      last = -1;
      for (int y = h - 1; y >= 0; --y) {
        if (mask.at(x, y)) {
          last = y;
        }
        if (last >= 0) {
          const std::int64_t d = static_cast<std::int64_t>(last - y) * (last - y);
          auto & cell = column.at(x, y);
          if (cell == inf || d < cell) {
            cell = d;
          }
        }
      }
    });

  // Phase 2: lower envelope of parabolas along each row.
  DistanceMap out(w, h, kNoInk);
  parallel_for(
    static_cast<std::size_t>(h), threads, [&](std::size_t yi) {
      const int y = static_cast<int>(yi);
      const std::int64_t * f = column.row(y);
      std::vector<int> apex;
      apex.reserve(static_cast<std::size_t>(w));

      // Parabola b overtakes parabola a (a < b) at x = num / den.
      auto num = [&](int a, int b) {
          return (f[b] + static_cast<std::int64_t>(b) * b) - (f[a] + static_cast<std::int64_t>(a) * a);
        };
      auto den = [](int a, int b) {return 2 * static_cast<std::int64_t>(b - a);};

      for (int q = 0; q < w; ++q) {
        if (f[q] == inf) {
          continue;
        }
        while (apex.size() >= 2) {
          const int a = apex[apex.size() - 2];
          const int b = apex.back();
          // Drop b when q overtakes it no later than b overtakes a.
          if (num(b, q) * den(a, b) <= num(a, b) * den(b, q)) {
            apex.pop_back();
          } else {
            break;
          }
        }
        apex.push_back(q);
      }
      if (apex.empty()) {
        return;
      }

      std::size_t k = 0;
      std::uint32_t * dst = out.row(y);
      for (int x = 0; x < w; ++x) {
        while (k + 1 < apex.size() &&
          num(apex[k], apex[k + 1]) < static_cast<std::int64_t>(x) * den(apex[k], apex[k + 1]))
        {
          ++k;
        }
        const std::int64_t dx = x - apex[k];
        dst[x] = static_cast<std::uint32_t>(dx * dx + f[apex[k]]);
      }
    });
  return out;
}

enum class ScaleMode
{
  FixedScale,
  MaxNormalize,
};

class NonPositiveSaturation : public std::invalid_argument
{
public:
  NonPositiveSaturation()
  : std::invalid_argument("saturation distance must be positive") {}
};

/**
 * Map true distances r = sqrt(d) onto 0..255, rounded half up.
 *   FixedScale:   g = 255 * min(r, d_sat) / d_sat
 *   MaxNormalize: g = 255 * r / r_max  (r_max = largest finite r; all 0 if r_max == 0)
 * kNoInk pixels map to 255 in both modes.
 */
inline GrayImage distance_to_gray(const DistanceMap & dm, ScaleMode mode, double d_sat)
{
  if (mode == ScaleMode::FixedScale && !(d_sat > 0.0)) {
    throw NonPositiveSaturation();
  }
  double scale_to = d_sat;
  if (mode == ScaleMode::MaxNormalize) {
    std::uint32_t max_d = 0;
    for (std::uint32_t d : dm.data()) {
      if (d != kNoInk) {
        max_d = std::max(max_d, d);
      }
    }
    scale_to = std::sqrt(static_cast<double>(max_d));
  }

  GrayImage out(dm.width(), dm.height());
  std::transform(
    dm.data().begin(), dm.data().end(), out.data().begin(), [&](std::uint32_t d) -> std::uint8_t {
      if (d == kNoInk) {
        return 255;
      }
      if (scale_to == 0.0) {
        return 0;
      }
      const double r = std::min(std::sqrt(static_cast<double>(d)), scale_to);
      return static_cast<std::uint8_t>(std::floor(255.0 * r / scale_to + 0.5));
    });
  return out;
}

}  // namespace wseg
