#pragma once

#include <charconv>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wseg/raster.hpp"
#include "wseg/segmenter.hpp"

namespace wseg {

/// Flat "key = value" settings; '#' starts a comment, blank lines are ignored.
class KeyValues
{
public:
  static KeyValues parse(std::string_view text)
  {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      const std::string trimmed = trim(line);
      if (trimmed.empty()) {
        continue;
      }
      const auto eq = trimmed.find('=');
      const std::string key = eq == std::string::npos ? "" : trim(trimmed.substr(0, eq));
      if (key.empty()) {
        throw FormatError(
                FormatError::Kind::BadLine, line_no,
                "line " + std::to_string(line_no) + ": expected \"key = value\"");
      }
      kv.values_[key] = {trim(trimmed.substr(eq + 1)), line_no};
    }
    return kv;
  }

  static KeyValues load(const std::filesystem::path & path)
  {
    return parse(detail::read_file(path));
  }

  bool has(const std::string & key) const {return values_.count(key) != 0;}

  const std::string & text(const std::string & key) const {return entry(key).value;}

  double real(const std::string & key) const
  {
    const auto & e = entry(key);
    try {
      std::size_t used = 0;
      const double v = std::stod(e.value, &used);
      if (used == e.value.size()) {
        return v;
      }
    } catch (const std::exception &) {
    }
    throw bad_value(key, e, "a real number");
  }

  long long integer(const std::string & key) const
  {
    const auto & e = entry(key);
    long long v = 0;
    const auto * end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
      throw bad_value(key, e, "an integer");
    }
    return v;
  }

  /// Two whitespace-separated integers "lo hi" (or one, meaning lo = hi).
  std::pair<int, int> range(const std::string & key) const
  {
    const auto & e = entry(key);
    std::istringstream in(e.value);
    int lo = 0, hi = 0;
    std::string rest;
    if (!(in >> lo)) {
      throw bad_value(key, e, "\"lo hi\"");
    }
    if (!(in >> hi)) {
      hi = lo;
    } else if (in >> rest) {
      throw bad_value(key, e, "\"lo hi\"");
    }
    return {lo, hi};
  }

  /// Keys present in the file, for rejecting unknown settings.
  std::vector<std::string> keys() const
  {
    std::vector<std::string> out;
    for (const auto & [k, v] : values_) {
      out.push_back(k);
    }
    return out;
  }

private:
  struct Entry
  {
    std::string value;
    std::size_t line = 0;
  };

  static std::string trim(const std::string & s)
  {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  const Entry & entry(const std::string & key) const
  {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      throw std::out_of_range("missing setting: " + key);
    }
    return it->second;
  }

  static FormatError bad_value(const std::string & key, const Entry & e, const std::string & want)
  {
    return FormatError(
      FormatError::Kind::BadLine, e.line,
      "line " + std::to_string(e.line) + ": " + key + " must be " + want);
  }

  std::map<std::string, Entry> values_;
};

inline ScaleMode parse_scale_mode(const std::string & s)
{
  if (s == "fixed" || s == "fixed-scale") {
    return ScaleMode::FixedScale;
  }
  if (s == "max" || s == "max-normalize") {
    return ScaleMode::MaxNormalize;
  }
  throw std::invalid_argument("scale mode must be \"fixed\" or \"max\", got \"" + s + "\"");
}

inline const char * to_string(ScaleMode m)
{
  return m == ScaleMode::FixedScale ? "fixed" : "max";
}

/// Overlay the settings of a config file onto `cfg`. Unknown keys are errors.
inline SegConfig apply_config(SegConfig cfg, const KeyValues & kv)
{
  for (const auto & key : kv.keys()) {
    if (key == "sigma") {
      cfg.sigma = kv.real(key);
    } else if (key == "alpha") {
      cfg.alpha = static_cast<int>(kv.integer(key));
    } else if (key == "scale_mode") {
      cfg.scale_mode = parse_scale_mode(kv.text(key));
    } else if (key == "d_sat") {
      cfg.d_sat = kv.real(key);
    } else if (key == "beta_factor") {
      cfg.beta_factor = kv.real(key);
    } else if (key == "width_join_factor") {
      cfg.width_join_factor = kv.real(key);
    } else if (key == "height_join_factor") {
      cfg.height_join_factor = kv.real(key);
    } else if (key == "valley_thickness_factor") {
      cfg.valley_thickness_factor = kv.real(key);
    } else if (key == "min_word_pixels") {
      const long long v = kv.integer(key);
      if (v < 0) {
        throw std::invalid_argument("min_word_pixels must be non-negative");
      }
      cfg.min_word_pixels = static_cast<std::size_t>(v);
    } else if (key == "fixed_threshold") {
      cfg.fixed_threshold = static_cast<int>(kv.integer(key));
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return cfg;
}

/// The resolved configuration in the same "key = value" format.
inline std::string format_config(const SegConfig & cfg)
{
  std::ostringstream out;
  out << "sigma = " << cfg.sigma << '\n'
      << "alpha = " << cfg.alpha << '\n'
      << "scale_mode = " << to_string(cfg.scale_mode) << '\n'
      << "d_sat = " << cfg.d_sat << '\n'
      << "beta_factor = " << cfg.beta_factor << '\n'
      << "width_join_factor = " << cfg.width_join_factor << '\n'
      << "height_join_factor = " << cfg.height_join_factor << '\n'
      << "valley_thickness_factor = " << cfg.valley_thickness_factor << '\n'
      << "min_word_pixels = " << cfg.min_word_pixels << '\n';
  if (cfg.fixed_threshold) {
    out << "fixed_threshold = " << *cfg.fixed_threshold << '\n';
  }
  return out.str();
}

}  // namespace wseg
