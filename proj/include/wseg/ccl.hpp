#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "wseg/raster.hpp"

namespace wseg {

enum class Connectivity
{
  Four = 4,
  Eight = 8,
};

/// Per-pixel component ids: 0 = background, 1..count in raster order of first pixel.
struct LabelMap
{
  Raster<std::uint32_t, struct LabelTag> labels;
  std::uint32_t count = 0;

  int width() const {return labels.width();}
  int height() const {return labels.height();}
  std::uint32_t at(int x, int y) const {return labels.at(x, y);}
};

/// Image borders, usable as a bit set.
enum Border : std::uint8_t
{
  kLeft = 1,
  kRight = 2,
  kTop = 4,
  kBottom = 8,
};

struct Component
{
  std::uint32_t label = 0;
  Box bbox;
  std::size_t pixel_count = 0;
  std::uint8_t touches = 0;  // Border bits

  int border_count() const
  {
    return ((touches & kLeft) != 0) + ((touches & kRight) != 0) +
           ((touches & kTop) != 0) + ((touches & kBottom) != 0);
  }
};

namespace detail {

/// Union-find over provisional labels with path halving; the smaller id wins.
class DisjointSet
{
public:
  std::uint32_t make()
  {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x)
  {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::uint32_t unite(std::uint32_t a, std::uint32_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b) {
      return a;
    }
    if (b < a) {
      std::swap(a, b);
    }
    parent_[b] = a;
    return a;
  }

  std::size_t size() const {return parent_.size();}

private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/**
 * Two-pass union-find labeling. The first pass assigns provisional labels
 * from the already-scanned neighbors (W, NW, N, NE for 8-connectivity; W, N
 * for 4) and records equivalences; the second pass resolves them and
 * renumbers roots densely in raster order of first encounter.
 */
inline LabelMap label_components(const InkMask & mask, Connectivity connectivity)
{
  const int w = mask.width();
  const int h = mask.height();
  const bool eight = connectivity == Connectivity::Eight;

  LabelMap result{decltype(LabelMap::labels)(w, h, 0u), 0};
  auto & lab = result.labels;
  detail::DisjointSet sets;
  sets.make();  // provisional id 0 stays background

  for (int y = 0; y < h; ++y) {
    const auto * row = mask.row(y);
    std::uint32_t * out = lab.row(y);
    const std::uint32_t * above = y > 0 ? lab.row(y - 1) : nullptr;
    for (int x = 0; x < w; ++x) {
      if (!row[x]) {
        continue;
      }
      std::uint32_t current = 0;
      auto consider = [&](std::uint32_t neighbor) {
          if (neighbor == 0) {
            return;
          }
          current = current == 0 ? neighbor : sets.unite(current, neighbor);
        };
      if (x > 0) {
        consider(out[x - 1]);
      }
      if (above != nullptr) {
        consider(above[x]);
        if (eight) {
          if (x > 0) {
            consider(above[x - 1]);
          }
          if (x + 1 < w) {
            consider(above[x + 1]);
          }
        }
      }
      out[x] = current != 0 ? current : sets.make();
    }
  }

  std::vector<std::uint32_t> final_id(sets.size(), 0);
  for (auto & v : lab.data()) {
    if (v == 0) {
      continue;
    }
    const std::uint32_t root = sets.find(v);
    if (final_id[root] == 0) {
      final_id[root] = ++result.count;
    }
    v = final_id[root];
  }
  return result;
}

/// One Component per label, in label order.
inline std::vector<Component> component_stats(const LabelMap & lm)
{
  struct Extent
  {
    int x0, y0, x1, y1;
  };
  std::vector<Extent> ext(lm.count, Extent{lm.width(), lm.height(), -1, -1});
  std::vector<Component> comps(lm.count);
  for (std::uint32_t i = 0; i < lm.count; ++i) {
    comps[i].label = i + 1;
  }
  for (int y = 0; y < lm.height(); ++y) {
    const std::uint32_t * row = lm.labels.row(y);
    for (int x = 0; x < lm.width(); ++x) {
      if (row[x] == 0) {
        continue;
      }
      if (row[x] > lm.count) {
        throw std::invalid_argument("label map holds an id above its count");
      }
      auto & e = ext[row[x] - 1];
      e.x0 = std::min(e.x0, x);
      e.y0 = std::min(e.y0, y);
      e.x1 = std::max(e.x1, x);
      e.y1 = std::max(e.y1, y);
      ++comps[row[x] - 1].pixel_count;
    }
  }
  for (std::uint32_t i = 0; i < lm.count; ++i) {
    const auto & e = ext[i];
    auto & c = comps[i];
    if (c.pixel_count == 0) {
      continue;
    }
    c.bbox = {e.x0, e.y0, e.x1 - e.x0 + 1, e.y1 - e.y0 + 1};
    c.touches = static_cast<std::uint8_t>(
      (e.x0 == 0 ? kLeft : 0) | (e.x1 == lm.width() - 1 ? kRight : 0) |
      (e.y0 == 0 ? kTop : 0) | (e.y1 == lm.height() - 1 ? kBottom : 0));
  }
  return comps;
}

}  // namespace wseg
