#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wseg/ccl.hpp"
#include "wseg/edt.hpp"
#include "wseg/raster.hpp"

namespace wseg {

/// Tunables for the whole page pipeline.
struct SegConfig
{
  double sigma = 1.0;
  int alpha = 160;
  ScaleMode scale_mode = ScaleMode::FixedScale;
  double d_sat = 8.0;
  double beta_factor = 0.2;
  double width_join_factor = 1.8;
  double height_join_factor = 1.6;
  double valley_thickness_factor = 0.1;
  std::size_t min_word_pixels = 15;
  /// Replaces Otsu binarization with `ink = gray < fixed_threshold` when set.
  std::optional<int> fixed_threshold;

  void validate() const
  {
    auto require = [](bool ok, const char * what) {
        if (!ok) {
          throw std::invalid_argument(what);
        }
      };
    require(sigma > 0.0, "sigma must be positive");
    require(alpha >= 0 && alpha <= 255, "alpha must lie in [0, 255]");
    require(d_sat > 0.0, "d_sat must be positive");
    require(beta_factor > 0.0, "beta_factor must be positive");
    require(width_join_factor > 0.0, "width_join_factor must be positive");
    require(height_join_factor > 0.0, "height_join_factor must be positive");
    require(valley_thickness_factor > 0.0, "valley_thickness_factor must be positive");
    require(
      !fixed_threshold || (*fixed_threshold >= 0 && *fixed_threshold <= 256),
      "fixed_threshold must lie in [0, 256]");
  }
};

enum class Provenance
{
  Direct,
  BorderSliced,
  SplitHorizontal,
  SplitVertical,
};

inline const char * to_string(Provenance p)
{
  switch (p) {
    case Provenance::Direct: return "direct";
    case Provenance::BorderSliced: return "border-sliced";
    case Provenance::SplitHorizontal: return "split-horizontal";
    case Provenance::SplitVertical: return "split-vertical";
  }
  return "unknown";
}

/// One extracted word: page-space bbox plus its own ink, clipped to the bbox.
struct WordBox
{
  Box bbox;
  InkMask mask;
  Provenance provenance = Provenance::Direct;

  friend bool operator==(const WordBox &, const WordBox &) = default;
};

/// Reading order: top-to-bottom, then left-to-right by bbox origin.
inline bool reading_order(const WordBox & a, const WordBox & b)
{
  if (a.bbox.y != b.bbox.y) {
    return a.bbox.y < b.bbox.y;
  }
  return a.bbox.x < b.bbox.x;
}

inline BoxList boxes_of(std::span<const WordBox> words)
{
  BoxList out;
  out.reserve(words.size());
  for (const auto & w : words) {
    out.push_back(w.bbox);
  }
  return out;
}

/// Shrink a word to the tight box of its ink (mask coordinates are local).
inline std::optional<WordBox> tighten(const InkMask & local, int origin_x, int origin_y, Provenance p)
{
  const Box t = tight_box(local);
  if (t.w == 0) {
    return std::nullopt;
  }
  return WordBox{{origin_x + t.x, origin_y + t.y, t.w, t.h}, crop(local, t), p};
}

/// Smeared regions: pixels whose mapped distance is at most alpha.
inline InkMask smear(const GrayImage & gray_dt, int alpha)
{
  InkMask mask(gray_dt.width(), gray_dt.height());
  std::transform(
    gray_dt.data().begin(), gray_dt.data().end(), mask.data().begin(),
    [alpha](std::uint8_t g) {return static_cast<std::uint8_t>(g <= alpha);});
  return mask;
}

/**
 * The page-spanning smear artifact: a component touching at least three
 * borders whose bbox covers >= 90% of both page dimensions. When several
 * qualify the one with the most pixels (then the lowest label) is returned.
 */
inline std::optional<std::uint32_t> detect_border_component(
  std::span<const Component> comps, int page_width, int page_height)
{
  std::optional<std::uint32_t> found;
  std::size_t best_pixels = 0;
  for (const Component & c : comps) {
    if (c.pixel_count == 0 || c.border_count() < 3) {
      continue;
    }
    const bool wide = 10LL * c.bbox.w >= 9LL * page_width;
    const bool tall = 10LL * c.bbox.h >= 9LL * page_height;
    if (wide && tall && c.pixel_count > best_pixels) {
      found = c.label;
      best_pixels = c.pixel_count;
    }
  }
  return found;
}

namespace detail {

/// Lower median of the positive entries; 0 if there are none.
inline double positive_lower_median(std::vector<int> values)
{
  std::erase_if(values, [](int v) {return v <= 0;});
  if (values.empty()) {
    return 0.0;
  }
  const std::size_t mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  return values[mid];
}

/// Center index of each maximal run of profile entries at or below `limit`.
inline std::vector<int> valley_centers(const std::vector<int> & profile, double limit)
{
  std::vector<int> centers;
  const int n = static_cast<int>(profile.size());
  int start = -1;
  for (int i = 0; i <= n; ++i) {
    const bool low = i < n && profile[i] <= limit;
    if (low && start < 0) {
      start = i;
    } else if (!low && start >= 0) {
      centers.push_back(start + (i - 1 - start) / 2);
      start = -1;
    }
  }
  return centers;
}

}  // namespace detail

/**
 * Cut a single smeared component along its thickness valleys.
 *
 * Column (row) thickness is the number of set pixels in that column (row).
 * A valley is a maximal run of columns (rows) whose thickness is at most
 * valley_thickness_factor times the lower median positive thickness.
 * The center column (row) of every valley is cleared, the remainder is
 * relabeled with 8-connectivity and each piece with at least
 * min_word_pixels pixels is returned as a mask of the input's size.
 */
inline std::vector<InkMask> slice_border_component(const InkMask & mask, const SegConfig & cfg)
{
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> col_thick(w, 0), row_thick(h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y)) {
        ++col_thick[x];
        ++row_thick[y];
      }
    }
  }
  const double col_limit = cfg.valley_thickness_factor * detail::positive_lower_median(col_thick);
  const double row_limit = cfg.valley_thickness_factor * detail::positive_lower_median(row_thick);
  const auto cut_cols = detail::valley_centers(col_thick, col_limit);
  const auto cut_rows = detail::valley_centers(row_thick, row_limit);

  if (cut_cols.empty() && cut_rows.empty()) {
    return {mask};
  }

  InkMask cut = mask;
  for (int x : cut_cols) {
    for (int y = 0; y < h; ++y) {
      cut.at(x, y) = 0;
    }
  }
  for (int y : cut_rows) {
    for (int x = 0; x < w; ++x) {
      cut.at(x, y) = 0;
    }
  }

  const LabelMap pieces = label_components(cut, Connectivity::Eight);
  const auto stats = component_stats(pieces);
  std::vector<InkMask> out;
  for (const Component & c : stats) {
    if (c.pixel_count < cfg.min_word_pixels) {
      continue;
    }
    InkMask piece(w, h);
    for (int y = c.bbox.y; y < c.bbox.bottom(); ++y) {
      for (int x = c.bbox.x; x < c.bbox.right(); ++x) {
        piece.at(x, y) = pieces.at(x, y) == c.label;
      }
    }
    out.push_back(std::move(piece));
  }
  return out;
}

/// Smeared regions after border handling, with where each region came from.
struct SmearRegions
{
  LabelMap labels;
  std::vector<Provenance> provenance;  // indexed by label - 1
};

/**
 * Replace the border mega-component (if any) by its valley-sliced pieces.
 * The returned label map is dense and renumbered in raster order.
 */
inline SmearRegions slice_border_regions(const LabelMap & lm, const SegConfig & cfg)
{
  const auto comps = component_stats(lm);
  const auto border = detect_border_component(comps, lm.width(), lm.height());
  if (!border) {
    return {lm, std::vector<Provenance>(lm.count, Provenance::Direct)};
  }

  const Box bb = comps[*border - 1].bbox;
  InkMask local(bb.w, bb.h);
  for (int y = 0; y < bb.h; ++y) {
    for (int x = 0; x < bb.w; ++x) {
      local.at(x, y) = lm.at(bb.x + x, bb.y + y) == *border;
    }
  }
  const auto pieces = slice_border_component(local, cfg);
  Raster<std::uint32_t> piece_of(bb.w, bb.h, 0u);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t p = 0; p < piece_of.size(); ++p) {
      if (pieces[i].data()[p]) {
        piece_of.data()[p] = static_cast<std::uint32_t>(i + 1);
      }
    }
  }

  // Old labels keep ids 1..count; pieces take count+1.. before renumbering.
  const std::uint32_t n_old = lm.count;
  SmearRegions out{lm, {}};
  auto & lab = out.labels.labels;
  for (int y = bb.y; y < bb.bottom(); ++y) {
    for (int x = bb.x; x < bb.right(); ++x) {
      if (lab.at(x, y) == *border) {
        const std::uint32_t piece = piece_of.at(x - bb.x, y - bb.y);
        lab.at(x, y) = piece == 0 ? 0 : n_old + piece;
      }
    }
  }

  std::vector<std::uint32_t> remap(n_old + pieces.size() + 1, 0);
  std::uint32_t next = 0;
  for (auto & v : lab.data()) {
    if (v == 0) {
      continue;
    }
    if (remap[v] == 0) {
      remap[v] = ++next;
      out.provenance.push_back(v > n_old ? Provenance::BorderSliced : Provenance::Direct);
    }
    v = remap[v];
  }
  out.labels.count = next;
  return out;
}

class DimensionMismatch : public std::invalid_argument
{
public:
  DimensionMismatch()
  : std::invalid_argument("ink mask and label map dimensions differ") {}
};

/**
 * Collect, for every smeared region, the original ink pixels it covers.
 * Regions with fewer than min_word_pixels ink pixels are dropped; the result
 * is in reading order (ties keep label order).
 */
inline std::vector<WordBox> extract_words(
  const InkMask & ink, const LabelMap & regions, const SegConfig & cfg,
  std::span<const Provenance> provenance = {})
{
  if (ink.width() != regions.width() || ink.height() != regions.height()) {
    throw DimensionMismatch();
  }
  struct Acc
  {
    int x0 = INT32_MAX, y0 = INT32_MAX, x1 = -1, y1 = -1;
    std::size_t count = 0;
  };
  std::vector<Acc> acc(regions.count);
  for (int y = 0; y < ink.height(); ++y) {
    for (int x = 0; x < ink.width(); ++x) {
      const std::uint32_t l = regions.at(x, y);
      if (l == 0 || !ink.at(x, y)) {
        continue;
      }
      auto & a = acc[l - 1];
      a.x0 = std::min(a.x0, x);
      a.y0 = std::min(a.y0, y);
      a.x1 = std::max(a.x1, x);
      a.y1 = std::max(a.y1, y);
      ++a.count;
    }
  }

  std::vector<WordBox> words;
  std::vector<std::uint32_t> word_label(regions.count, 0);
  for (std::uint32_t i = 0; i < regions.count; ++i) {
    const auto & a = acc[i];
    if (a.count == 0 || a.count < cfg.min_word_pixels) {
      continue;
    }
    WordBox word;
    word.bbox = {a.x0, a.y0, a.x1 - a.x0 + 1, a.y1 - a.y0 + 1};
    word.mask = InkMask(word.bbox.w, word.bbox.h);
    word.provenance = i < provenance.size() ? provenance[i] : Provenance::Direct;
    word_label[i] = static_cast<std::uint32_t>(words.size() + 1);
    words.push_back(std::move(word));
  }
  for (int y = 0; y < ink.height(); ++y) {
    for (int x = 0; x < ink.width(); ++x) {
      const std::uint32_t l = regions.at(x, y);
      if (l == 0 || !ink.at(x, y) || word_label[l - 1] == 0) {
        continue;
      }
      auto & word = words[word_label[l - 1] - 1];
      word.mask.at(x - word.bbox.x, y - word.bbox.y) = 1;
    }
  }
  std::stable_sort(words.begin(), words.end(), reading_order);
  return words;
}

}  // namespace wseg
