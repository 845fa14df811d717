#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wseg/segmenter.hpp"

namespace wseg {

struct PageStats
{
  int median_word_width = 0;
  int median_word_height = 0;
  std::size_t word_count = 0;

  friend bool operator==(const PageStats &, const PageStats &) = default;
};

namespace detail {

inline int lower_median(std::vector<int> v)
{
  if (v.empty()) {
    return 0;
  }
  const auto mid = static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[static_cast<std::size_t>(mid)];
}

}  // namespace detail

/// Lower medians of word bbox widths and heights.
inline PageStats page_stats(std::span<const WordBox> words)
{
  std::vector<int> widths, heights;
  widths.reserve(words.size());
  heights.reserve(words.size());
  for (const auto & w : words) {
    widths.push_back(w.bbox.w);
    heights.push_back(w.bbox.h);
  }
  return {detail::lower_median(std::move(widths)), detail::lower_median(std::move(heights)), words.size()};
}

/// Half-side of the search square for cross-line cuts: round(factor * height), at least 1.
inline int beta_of(int word_height, double beta_factor)
{
  const double v = std::floor(beta_factor * word_height + 0.5);
  return std::max(1, static_cast<int>(v));
}

/// Maximum recursion depth of split_horizontal_join.
inline constexpr int kMaxHorizontalSplitDepth = 4;

namespace detail {

/// [lo, hi) band of a length-n profile that excludes `margin_fraction` at both ends
/// and never includes the first or last entry.
inline std::pair<int, int> central_band(int n, double margin_fraction)
{
  const int margin = static_cast<int>(std::floor(margin_fraction * n));
  return {std::max(1, margin), std::min(n - 1, n - margin)};
}

/// Widest run of zeros in profile[lo, hi); returns its center or -1.
inline int widest_zero_run_center(const std::vector<int> & profile, int lo, int hi)
{
  int best_start = -1, best_len = 0;
  for (int i = lo; i < hi; ) {
    if (profile[i] != 0) {
      ++i;
      continue;
    }
    int j = i;
    while (j < hi && profile[j] == 0) {
      ++j;
    }
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  return best_start < 0 ? -1 : best_start + (best_len - 1) / 2;
}

/// Center of the widest run of minimal entries in profile[lo, hi) (first run on ties).
inline int widest_min_run_center(const std::vector<int> & profile, int lo, int hi)
{
  const int min_value = *std::min_element(profile.begin() + lo, profile.begin() + hi);
  int best_start = lo, best_len = 0;
  for (int i = lo; i < hi; ) {
    if (profile[i] != min_value) {
      ++i;
      continue;
    }
    int j = i;
    while (j < hi && profile[j] == min_value) {
      ++j;
    }
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  return best_start + (best_len - 1) / 2;
}

inline std::vector<int> column_profile(const InkMask & m)
{
  std::vector<int> p(m.width(), 0);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      p[x] += m.at(x, y) != 0;
    }
  }
  return p;
}

inline std::vector<int> row_profile(const InkMask & m)
{
  std::vector<int> p(m.height(), 0);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      p[y] += m.at(x, y) != 0;
    }
  }
  return p;
}

/// Ink pixel with at least one 8-neighbor that is background or off-mask.
inline bool is_contour(const InkMask & m, int x, int y)
{
  if (!m.at(x, y)) {
    return false;
  }
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if ((dx != 0 || dy != 0) && (!m.contains(x + dx, y + dy) || !m.at(x + dx, y + dy))) {
        return true;
      }
    }
  }
  return false;
}

struct Point
{
  int x = 0;
  int y = 0;
};

inline std::int64_t squared_distance(Point a, Point b)
{
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace detail

/**
 * Split a candidate that is too wide for one word at its vertical valley.
 *
 * Candidates no wider than width_join_factor * median width are returned as
 * is. Otherwise the cut column is the center of the widest empty column run
 * inside the central 80% of the bbox, or failing that the leftmost column of
 * minimum ink. Both halves are re-checked recursively, up to
 * kMaxHorizontalSplitDepth levels.
 */
inline std::vector<WordBox> split_horizontal_join(
  const WordBox & word, const PageStats & stats, const SegConfig & cfg, int depth = 0)
{
  const int w = word.bbox.w;
  if (stats.word_count == 0 || stats.median_word_width <= 0 ||
    w <= cfg.width_join_factor * stats.median_word_width || depth >= kMaxHorizontalSplitDepth)
  {
    return {word};
  }
  const auto [lo, hi] = detail::central_band(w, 0.1);
  if (lo >= hi) {
    return {word};
  }
  const auto profile = detail::column_profile(word.mask);
  int cut = detail::widest_zero_run_center(profile, lo, hi);
  if (cut < 0) {
    cut = static_cast<int>(std::min_element(profile.begin() + lo, profile.begin() + hi) - profile.begin());
  }

  InkMask left(w, word.bbox.h), right(w, word.bbox.h);
  for (int y = 0; y < word.bbox.h; ++y) {
    for (int x = 0; x < w; ++x) {
      (x < cut ? left : right).at(x, y) = word.mask.at(x, y);
    }
  }
  auto a = tighten(left, word.bbox.x, word.bbox.y, Provenance::SplitHorizontal);
  auto b = tighten(right, word.bbox.x, word.bbox.y, Provenance::SplitHorizontal);
  if (!a || !b) {
    return {word};
  }
  std::vector<WordBox> out = split_horizontal_join(*a, stats, cfg, depth + 1);
  for (auto & piece : split_horizontal_join(*b, stats, cfg, depth + 1)) {
    out.push_back(std::move(piece));
  }
  return out;
}

/**
 * Split a candidate that is too tall for one word into an upper and a lower
 * word (two text lines joined by ascenders/descenders).
 *
 * 1. The separating row is the center of the widest run of minimum-ink rows
 *    in the central 60% of the bbox; rows above it form the upper set.
 * 2. Per column, the lowest upper pixel and the highest lower pixel are
 *    paired; the pair in the same (else nearest) column with the smallest
 *    vertical gap anchors the cut.
 * 3. A square of half-side beta_of(height) is centered on the anchor
 *    midpoint. The closest pair of contour pixels inside it, one from each
 *    set, defines the cut: their perpendicular bisector within the square,
 *    continued horizontally from the square's sides to the bbox edges.
 * 4. Every ink pixel above the cut goes to the upper word, the rest to the
 *    lower word.
 */
inline std::vector<WordBox> split_vertical_join(
  const WordBox & word, const PageStats & stats, const SegConfig & cfg)
{
  using detail::Point;
  const int w = word.bbox.w;
  const int h = word.bbox.h;
  if (stats.word_count == 0 || stats.median_word_height <= 0 ||
    h <= cfg.height_join_factor * stats.median_word_height)
  {
    return {word};
  }
  const auto [lo, hi] = detail::central_band(h, 0.2);
  if (lo >= hi) {
    return {word};
  }
  const InkMask & m = word.mask;
  const int split_row = detail::widest_min_run_center(detail::row_profile(m), lo, hi);

  // Anchor pair: lowest upper pixel / highest lower pixel per column.
  std::vector<int> upper_bottom(w, -1), lower_top(w, -1);
  for (int x = 0; x < w; ++x) {
    for (int y = split_row - 1; y >= 0; --y) {
      if (m.at(x, y)) {
        upper_bottom[x] = y;
        break;
      }
    }
    for (int y = split_row; y < h; ++y) {
      if (m.at(x, y)) {
        lower_top[x] = y;
        break;
      }
    }
  }
  std::optional<std::pair<Point, Point>> anchor;
  std::int64_t best_dc = std::numeric_limits<std::int64_t>::max();
  std::int64_t best_gap = best_dc;
  for (int cu = 0; cu < w; ++cu) {
    if (upper_bottom[cu] < 0) {
      continue;
    }
    for (int cl = 0; cl < w; ++cl) {
      if (lower_top[cl] < 0) {
        continue;
      }
      const std::int64_t dc = std::abs(cu - cl);
      const std::int64_t gap = lower_top[cl] - upper_bottom[cu];
      if (dc < best_dc || (dc == best_dc && gap < best_gap)) {
        best_dc = dc;
        best_gap = gap;
        anchor = std::make_pair(Point{cu, upper_bottom[cu]}, Point{cl, lower_top[cl]});
      }
    }
  }
  if (!anchor) {
    return {word};
  }

  // Closest cross-set contour pair inside the beta square.
  const int beta = beta_of(h, cfg.beta_factor);
  const double cx = 0.5 * (anchor->first.x + anchor->second.x);
  const double cy = 0.5 * (anchor->first.y + anchor->second.y);
  const double wx0 = cx - beta, wx1 = cx + beta, wy0 = cy - beta, wy1 = cy + beta;
  std::vector<Point> upper, lower;
  for (int y = std::max(0, static_cast<int>(std::ceil(wy0)));
    y <= std::min(h - 1, static_cast<int>(std::floor(wy1))); ++y)
  {
    for (int x = std::max(0, static_cast<int>(std::ceil(wx0)));
      x <= std::min(w - 1, static_cast<int>(std::floor(wx1))); ++x)
    {
      if (detail::is_contour(m, x, y)) {
        (y < split_row ? upper : lower).push_back({x, y});
      }
    }
  }
  Point a = anchor->first, b = anchor->second;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const Point & p : upper) {
    for (const Point & q : lower) {
      const std::int64_t d = detail::squared_distance(p, q);
      if (d < best) {
        best = d;
        a = p;
        b = q;
      }
    }
  }

  // Perpendicular bisector of a-b, solved for y; a.y < b.y so it is never vertical.
  const double k0 = (static_cast<double>(b.x) * b.x + static_cast<double>(b.y) * b.y -
    static_cast<double>(a.x) * a.x - static_cast<double>(a.y) * a.y) / (2.0 * (b.y - a.y));
  const double k1 = static_cast<double>(b.x - a.x) / (b.y - a.y);
  auto cut_y = [&](int x) {
      const double xc = std::clamp(static_cast<double>(x), wx0, wx1);
      return std::clamp(k0 - k1 * xc, wy0, wy1);
    };

  InkMask top(w, h), bottom(w, h);
  for (int x = 0; x < w; ++x) {
    const double boundary = cut_y(x);
    for (int y = 0; y < h; ++y) {
      if (m.at(x, y)) {
        (y < boundary ? top : bottom).at(x, y) = 1;
      }
    }
  }
  auto t = tighten(top, word.bbox.x, word.bbox.y, Provenance::SplitVertical);
  auto s = tighten(bottom, word.bbox.x, word.bbox.y, Provenance::SplitVertical);
  if (!t || !s) {
    return {word};
  }
  return {std::move(*t), std::move(*s)};
}

/// Upper bound on repair passes; real pages settle in two or three.
inline constexpr int kMaxRepairPasses = 64;

/**
 * Under-segmentation repair. Each pass recomputes page statistics and runs
 * split_vertical_join then split_horizontal_join on every word; passes repeat
 * until nothing splits, so the result is a fixed point and repair is
 * idempotent. Output is in reading order.
 */
inline std::vector<WordBox> repair(std::vector<WordBox> words, const SegConfig & cfg)
{
  for (int pass = 0; pass < kMaxRepairPasses; ++pass) {
    const PageStats stats = page_stats(words);
    std::vector<WordBox> next;
    next.reserve(words.size());
    for (const auto & word : words) {
      for (const auto & piece : split_vertical_join(word, stats, cfg)) {
        for (auto & part : split_horizontal_join(piece, stats, cfg)) {
          next.push_back(std::move(part));
        }
      }
    }
    const bool changed = next.size() != words.size();
    words = std::move(next);
    if (!changed) {
      break;
    }
  }
  std::stable_sort(words.begin(), words.end(), reading_order);
  return words;
}

}  // namespace wseg
