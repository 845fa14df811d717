#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "wseg/config.hpp"
#include "wseg/raster.hpp"

namespace wseg {

/**
 * xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D), seeded
 * through one splitmix64 step so that nearby seeds give unrelated streams.
 * A zero state is replaced by 0x9E3779B97F4A7C15.
 */
class XorShift64Star
{
public:
  explicit XorShift64Star(std::uint64_t seed)
  {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    state_ = z ^ (z >> 31);
    if (state_ == 0) {
      state_ = 0x9E3779B97F4A7C15ull;
    }
  }

  std::uint64_t next()
  {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  /// Integer in [lo, hi] as lo + next() % (hi - lo + 1).
  int uniform(int lo, int hi)
  {
    if (hi <= lo) {
      return lo;
    }
    const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
    return static_cast<int>(lo + static_cast<std::int64_t>(next() % span));
  }

  /// Real in [0, 1) from the top 53 bits.
  double unit()
  {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

struct IntRange
{
  int lo = 0;
  int hi = 0;
  friend bool operator==(const IntRange &, const IntRange &) = default;
};

/// Layout and degradation parameters of a synthetic handwriting page.
struct SynthSpec
{
  int page_width = 1600;
  int page_height = 520;
  int margin = 20;
  int lines = 10;
  IntRange words_per_line{13, 17};
  IntRange chars_per_word{3, 5};
  IntRange char_size{8, 12};
  IntRange intra_word_gap{1, 3};
  IntRange inter_word_gap{14, 20};
  IntRange line_gap{22, 28};
  int jitter = 1;
  int stroke_gray = 40;
  double noise_salt_prob = 0.01;
  double ascender_prob = 0.15;
  double descender_prob = 0.15;
  IntRange stub_length{2, 4};
  double notch_prob = 0.5;
  std::uint64_t seed = 1;

  void validate() const
  {
    auto require = [](bool ok, const std::string & what) {
        if (!ok) {
          throw std::invalid_argument("synth spec: " + what);
        }
      };
    for (const auto & [name, r] : {
        std::pair{"words_per_line", words_per_line}, std::pair{"chars_per_word", chars_per_word},
        std::pair{"char_size", char_size}, std::pair{"intra_word_gap", intra_word_gap},
        std::pair{"inter_word_gap", inter_word_gap}, std::pair{"line_gap", line_gap},
        std::pair{"stub_length", stub_length}})
    {
      require(r.lo <= r.hi && r.lo >= 0, std::string(name) + " must be a nonempty non-negative range");
    }
    require(page_width >= 1 && page_height >= 1, "page dimensions must be positive");
    require(chars_per_word.lo >= 1 && char_size.lo >= 1, "words need at least one glyph of size >= 1");
    require(intra_word_gap.hi < inter_word_gap.lo, "max intra_word_gap must be below min inter_word_gap");
    require(lines >= 0 && margin >= 0 && jitter >= 0, "lines, margin and jitter must be non-negative");
    require(stroke_gray >= 0 && stroke_gray < 255, "stroke_gray must lie in [0, 254]");
    require(noise_salt_prob >= 0.0 && noise_salt_prob <= 1.0, "noise_salt_prob must be a probability");
    require(ascender_prob >= 0.0 && ascender_prob <= 1.0, "ascender_prob must be a probability");
    require(descender_prob >= 0.0 && descender_prob <= 1.0, "descender_prob must be a probability");
    require(notch_prob >= 0.0 && notch_prob <= 1.0, "notch_prob must be a probability");
  }
};

class LayoutOverflow : public std::runtime_error
{
public:
  explicit LayoutOverflow(const std::string & what)
  : std::runtime_error("synthetic layout does not fit the page: " + what) {}
};

struct SynthPage
{
  GrayImage image;
  BoxList truth;
};

/**
 * Render a page of pseudo-words and their tight ink boxes.
 *
 * Lines are stacked from the top margin. Each line has a body band of
 * char_size.hi + 2 * jitter rows; consecutive bands are line_gap rows apart
 * and ascender/descender stubs may reach into that gap. A word is a run of
 * filled rectangular glyphs, bottom-aligned on a baseline shifted by at most
 * `jitter`, separated by intra-word gaps. Glyphs may carry one notch cut
 * from the top edge and one ascender and/or descender stub. Finally every
 * pixel flips between background and stroke with noise_salt_prob; truth
 * boxes describe the glyph ink before noise. Random draws happen in exactly
 * this order, so a seed fixes the page.
 */
inline SynthPage synth_page(const SynthSpec & spec)
{
  spec.validate();
  XorShift64Star rng(spec.seed);
  SynthPage page{GrayImage(spec.page_width, spec.page_height, 255), {}};
  auto & img = page.image;
  const auto ink = static_cast<std::uint8_t>(spec.stroke_gray);

  auto fill = [&](int x0, int y0, int x1, int y1, std::uint8_t v) {
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          img.at(x, y) = v;
        }
      }
    };

  const int band_height = spec.char_size.hi + 2 * spec.jitter;
  int band_top = spec.margin + spec.stub_length.hi;
  for (int line = 0; line < spec.lines; ++line) {
    if (line > 0) {
      band_top += band_height + rng.uniform(spec.line_gap.lo, spec.line_gap.hi);
    }
    if (band_top + band_height + spec.stub_length.hi > spec.page_height - spec.margin) {
      throw LayoutOverflow("line " + std::to_string(line + 1) + " runs past the bottom margin");
    }
    const int nominal_baseline = band_top + spec.jitter + spec.char_size.hi;
    const int words = rng.uniform(spec.words_per_line.lo, spec.words_per_line.hi);
    int x = spec.margin;
    for (int word = 0; word < words; ++word) {
      if (word > 0) {
        x += rng.uniform(spec.inter_word_gap.lo, spec.inter_word_gap.hi);
      }
      const int baseline = nominal_baseline + rng.uniform(-spec.jitter, spec.jitter);
      const int chars = rng.uniform(spec.chars_per_word.lo, spec.chars_per_word.hi);
      int x0 = x, y0 = baseline, y1 = baseline;
      for (int c = 0; c < chars; ++c) {
        if (c > 0) {
          x += rng.uniform(spec.intra_word_gap.lo, spec.intra_word_gap.hi);
        }
        const int gw = rng.uniform(spec.char_size.lo, spec.char_size.hi);
        const int gh = rng.uniform(spec.char_size.lo, spec.char_size.hi);
        if (x + gw > spec.page_width - spec.margin) {
          throw LayoutOverflow("line " + std::to_string(line + 1) + " runs past the right margin");
        }
        const int top = baseline - gh;
        fill(x, top, x + gw, baseline, ink);
        y0 = std::min(y0, top);

        const int stub_w = std::max(1, gw / 4);
        int asc_x0 = -1, asc_x1 = -1;
        if (rng.unit() < spec.ascender_prob) {
          asc_x0 = rng.uniform(x, x + gw - stub_w);
          asc_x1 = asc_x0 + stub_w;
          const int len = rng.uniform(spec.stub_length.lo, spec.stub_length.hi);
          fill(asc_x0, top - len, asc_x1, top, ink);
          y0 = std::min(y0, top - len);
        }
        if (rng.unit() < spec.descender_prob) {
          const int sx = rng.uniform(x, x + gw - stub_w);
          const int len = rng.uniform(spec.stub_length.lo, spec.stub_length.hi);
          fill(sx, baseline, sx + stub_w, baseline + len, ink);
          y1 = std::max(y1, baseline + len);
        }
        // The notch spares the outer columns and bottom half, so the glyph
        // stays connected and its bbox is unchanged.
        if (rng.unit() < spec.notch_prob && gw >= 4 && gh >= 4) {
          const int nw = rng.uniform(1, std::max(1, (gw - 2) / 2));
          const int nx = rng.uniform(x + 1, x + gw - 1 - nw);
          const int depth = rng.uniform(1, gh / 2);
          if (nx + nw <= asc_x0 || nx >= asc_x1) {
            fill(nx, top, nx + nw, top + depth, 255);
          }
        }
        x += gw;
      }
      page.truth.push_back({x0, y0, x - x0, y1 - y0});
    }
  }

  if (spec.noise_salt_prob > 0.0) {
    for (auto & v : img.data()) {
      if (rng.unit() < spec.noise_salt_prob) {
        v = v == 255 ? ink : std::uint8_t{255};
      }
    }
  }
  return page;
}

/// Read a synth spec from "key = value" settings on top of `base`.
inline SynthSpec apply_synth_settings(SynthSpec spec, const KeyValues & kv)
{
  auto range = [&](const std::string & key) {
      const auto [lo, hi] = kv.range(key);
      return IntRange{lo, hi};
    };
  for (const auto & key : kv.keys()) {
    if (key == "page_width") {
      spec.page_width = static_cast<int>(kv.integer(key));
    } else if (key == "page_height") {
      spec.page_height = static_cast<int>(kv.integer(key));
    } else if (key == "margin") {
      spec.margin = static_cast<int>(kv.integer(key));
    } else if (key == "lines") {
      spec.lines = static_cast<int>(kv.integer(key));
    } else if (key == "words_per_line") {
      spec.words_per_line = range(key);
    } else if (key == "chars_per_word") {
      spec.chars_per_word = range(key);
    } else if (key == "char_size") {
      spec.char_size = range(key);
    } else if (key == "intra_word_gap") {
      spec.intra_word_gap = range(key);
    } else if (key == "inter_word_gap") {
      spec.inter_word_gap = range(key);
    } else if (key == "line_gap") {
      spec.line_gap = range(key);
    } else if (key == "jitter") {
      spec.jitter = static_cast<int>(kv.integer(key));
    } else if (key == "stroke_gray") {
      spec.stroke_gray = static_cast<int>(kv.integer(key));
    } else if (key == "noise_salt_prob") {
      spec.noise_salt_prob = kv.real(key);
    } else if (key == "ascender_prob") {
      spec.ascender_prob = kv.real(key);
    } else if (key == "descender_prob") {
      spec.descender_prob = kv.real(key);
    } else if (key == "stub_length") {
      spec.stub_length = range(key);
    } else if (key == "notch_prob") {
      spec.notch_prob = kv.real(key);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(kv.integer(key));
    } else {
      throw std::invalid_argument("unknown synth spec key: " + key);
    }
  }
  spec.validate();
  return spec;
}

}  // namespace wseg
