#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "wseg/ccl.hpp"
#include "wseg/edt.hpp"
#include "wseg/postproc.hpp"
#include "wseg/preprocess.hpp"
#include "wseg/raster.hpp"
#include "wseg/segmenter.hpp"

namespace wseg {

struct StageTiming
{
  std::string stage;
  double milliseconds = 0.0;
};

struct PageResult
{
  std::vector<WordBox> words;
  std::vector<StageTiming> timings;
};

/// Intermediate rasters, exposed for tests and diagnostics.
struct PageIntermediates
{
  GrayImage blurred;
  InkMask ink;
  DistanceMap distance;
  GrayImage distance_gray;
  InkMask smeared;
};

namespace detail {

class StageClock
{
public:
  explicit StageClock(std::vector<StageTiming> & sink)
  : sink_{sink}, last_{std::chrono::steady_clock::now()} {}

  void mark(std::string stage)
  {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({std::move(stage), std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

private:
  std::vector<StageTiming> & sink_;
  std::chrono::steady_clock::time_point last_;
};

}  // namespace detail

/**
 * Page gray image to words: blur, binarize, distance transform, map to gray,
 * smear at alpha, label (8-connectivity), slice a border mega-component,
 * collect word ink, repair under-segmentation. `threads` only affects speed.
 */
inline PageResult segment_page(
  const GrayImage & page, const SegConfig & cfg, unsigned threads = 1,
  PageIntermediates * keep = nullptr)
{
  cfg.validate();
  PageResult result;
  detail::StageClock clock(result.timings);

  GrayImage blurred = gaussian_blur(page, cfg.sigma, threads);
  clock.mark("gaussian_blur");
  InkMask ink = cfg.fixed_threshold ? binarize_fixed(blurred, *cfg.fixed_threshold) : binarize_otsu(blurred);
  clock.mark("binarize");
  DistanceMap distance = edt_exact(ink, threads);
  clock.mark("edt");
  GrayImage distance_gray = distance_to_gray(distance, cfg.scale_mode, cfg.d_sat);
  clock.mark("distance_to_gray");
  InkMask smeared = smear(distance_gray, cfg.alpha);
  clock.mark("smear");
  const LabelMap labels = label_components(smeared, Connectivity::Eight);
  clock.mark("label");
  const SmearRegions regions = slice_border_regions(labels, cfg);
  clock.mark("border_slice");
  auto words = extract_words(ink, regions.labels, cfg, regions.provenance);
  clock.mark("extract_words");
  result.words = repair(std::move(words), cfg);
  clock.mark("repair");

  if (keep != nullptr) {
    *keep = {std::move(blurred), std::move(ink), std::move(distance), std::move(distance_gray),
      std::move(smeared)};
  }
  return result;
}

/// Word image: the page's gray values on the word's ink, white elsewhere.
inline GrayImage word_crop(const GrayImage & page, const WordBox & word)
{
  GrayImage out(word.bbox.w, word.bbox.h, 255);
  for (int y = 0; y < word.bbox.h; ++y) {
    for (int x = 0; x < word.bbox.w; ++x) {
      if (word.mask.at(x, y)) {
        out.at(x, y) = page.at(word.bbox.x + x, word.bbox.y + y);
      }
    }
  }
  return out;
}

}  // namespace wseg
