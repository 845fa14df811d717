#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wseg/raster.hpp"

namespace wseg {

/// Coverage links between predicted and ground-truth boxes.
struct Matching
{
  /// For each truth box, the predicted boxes covering it (ascending index).
  std::vector<std::vector<std::size_t>> covering;
  /// For each predicted box, the truth boxes it covers (ascending index).
  std::vector<std::vector<std::size_t>> covered;
};

/**
 * Predicted box p covers truth box t when area(t & p) >= coverage * area(t).
 * The default coverage of 0.5 is evaluated exactly in integers.
 */
inline Matching match_boxes(const BoxList & pred, const BoxList & truth, double coverage = 0.5)
{
  Matching m;
  m.covering.resize(truth.size());
  m.covered.resize(pred.size());
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const long long area = truth[t].area();
    for (std::size_t p = 0; p < pred.size(); ++p) {
      const long long inter = intersection_area(truth[t], pred[p]);
      const bool hit = coverage == 0.5 ?
        2 * inter >= area :
        static_cast<double>(inter) >= coverage * static_cast<double>(area);
      if (inter > 0 && hit) {
        m.covering[t].push_back(p);
        m.covered[p].push_back(t);
      }
    }
  }
  return m;
}

struct ErrorCounts
{
  std::size_t over = 0;
  std::size_t under = 0;
  friend bool operator==(const ErrorCounts &, const ErrorCounts &) = default;
};

/**
 * Classify every truth word at most once:
 *  - no covering prediction, or a covering prediction that also covers
 *    another truth word: under-segmented;
 *  - otherwise two or more covering predictions: over-segmented.
 */
inline ErrorCounts count_errors(const Matching & m)
{
  ErrorCounts counts;
  for (const auto & preds : m.covering) {
    bool merged = preds.empty();
    for (std::size_t p : preds) {
      merged = merged || m.covered[p].size() > 1;
    }
    if (merged) {
      ++counts.under;
    } else if (preds.size() >= 2) {
      ++counts.over;
    }
  }
  return counts;
}

class ZeroTotal : public std::invalid_argument
{
public:
  ZeroTotal()
  : std::invalid_argument("success rate needs at least one ground-truth word") {}
};

/// Percentage stored as an exact count of hundredths.
struct SuccessRate
{
  std::int64_t hundredths = 0;

  double value() const {return static_cast<double>(hundredths) / 100.0;}

  std::string str() const
  {
    std::ostringstream out;
    out << hundredths / 100 << '.' << (hundredths % 100 < 10 ? "0" : "") << hundredths % 100;
    return out.str();
  }

  friend bool operator==(const SuccessRate &, const SuccessRate &) = default;
};

/// (T - (O + U)) * 100 / T, rounded half up to two decimals.
inline SuccessRate success_rate(std::uint64_t total, std::uint64_t over, std::uint64_t under)
{
  if (total == 0) {
    throw ZeroTotal();
  }
  if (over + under > total) {
    throw std::invalid_argument("O + U exceeds T");
  }
  const std::uint64_t good = total - over - under;
  return {static_cast<std::int64_t>((good * 20000 + total) / (2 * total))};
}

struct EvalReport
{
  std::size_t total_truth = 0;
  std::size_t over_segmented = 0;
  std::size_t under_segmented = 0;
  std::size_t extracted = 0;
  SuccessRate rate;
};

inline EvalReport evaluate(const BoxList & pred, const BoxList & truth, double coverage = 0.5)
{
  const ErrorCounts e = count_errors(match_boxes(pred, truth, coverage));
  EvalReport r;
  r.total_truth = truth.size();
  r.over_segmented = e.over;
  r.under_segmented = e.under;
  r.extracted = truth.size() - e.over - e.under;
  r.rate = success_rate(truth.size(), e.over, e.under);
  return r;
}

inline EvalReport make_report(std::size_t total, std::size_t over, std::size_t under)
{
  return {total, over, under, total - over - under, success_rate(total, over, under)};
}

/// Five "key: value" lines: T, extracted, O, U, success rate.
inline std::string format_report(const EvalReport & r)
{
  std::ostringstream out;
  out << "Actual number of words present (T): " << r.total_truth << '\n'
      << "Number of words extracted experimentally: " << r.extracted << '\n'
      << "Number of over-segmented words (O): " << r.over_segmented << '\n'
      << "Number of under-segmented words (U): " << r.under_segmented << '\n'
      << "Success rate: " << r.rate.str() << "%\n";
  return out.str();
}

}  // namespace wseg
