#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wseg {

/**
 * Row-major 2-D pixel container. The tag parameter keeps rasters that share
 * a pixel type (gray intensities vs. ink flags) from converting silently.
 */
template<class Pixel, class Tag = Pixel>
class Raster
{
public:
  using value_type = Pixel;

  Raster() = default;

  Raster(int width, int height, Pixel fill = Pixel{})
  : width_{width}, height_{height}
  {
    if (width < 0 || height < 0) {
      throw std::invalid_argument("raster dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Raster(int width, int height, std::vector<Pixel> data)
  : width_{width}, height_{height}, data_{std::move(data)}
  {
    if (width < 0 || height < 0 ||
      data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    {
      throw std::invalid_argument("raster data length must equal width * height");
    }
  }

  int width() const {return width_;}
  int height() const {return height_;}
  std::size_t size() const {return data_.size();}
  bool empty() const {return data_.empty();}

  Pixel & at(int x, int y) {return data_[index(x, y)];}
  const Pixel & at(int x, int y) const {return data_[index(x, y)];}

  bool contains(int x, int y) const {return x >= 0 && y >= 0 && x < width_ && y < height_;}

  std::vector<Pixel> & data() {return data_;}
  const std::vector<Pixel> & data() const {return data_;}

  Pixel * row(int y) {return data_.data() + static_cast<std::size_t>(y) * width_;}
  const Pixel * row(int y) const {return data_.data() + static_cast<std::size_t>(y) * width_;}

  friend bool operator==(const Raster &, const Raster &) = default;

private:
  std::size_t index(int x, int y) const
  {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Pixel> data_;
};

struct GrayTag;
struct InkTag;

struct Rgb
{
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb &, const Rgb &) = default;
};

/// 8-bit intensities, 0 = black.
using GrayImage = Raster<std::uint8_t, GrayTag>;
using RgbImage = Raster<Rgb>;
/// Ink flags: nonzero = ink (object) pixel.
using InkMask = Raster<std::uint8_t, InkTag>;

/// Axis-aligned pixel rectangle, top-left origin.
struct Box
{
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long area() const {return static_cast<long long>(w) * h;}
  int right() const {return x + w;}
  int bottom() const {return y + h;}

  bool inside(int width, int height) const
  {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && right() <= width && bottom() <= height;
  }

  friend bool operator==(const Box &, const Box &) = default;
};

using BoxList = std::vector<Box>;

inline long long intersection_area(const Box & a, const Box & b)
{
  const long long w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const long long h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return (w > 0 && h > 0) ? w * h : 0;
}

/// Tight bounding box of the set pixels of a mask; w == 0 when there are none.
inline Box tight_box(const InkMask & mask)
{
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    const auto * row = mask.row(y);
    for (int x = 0; x < mask.width(); ++x) {
      if (row[x]) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  if (x1 < 0) {
    return {};
  }
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

inline std::size_t count_ink(const InkMask & mask)
{
  return static_cast<std::size_t>(std::count_if(
    mask.data().begin(), mask.data().end(), [](std::uint8_t v) {return v != 0;}));
}

/// Copy of the sub-rectangle `box` of `src` (box must lie inside src).
template<class P, class T>
Raster<P, T> crop(const Raster<P, T> & src, const Box & box)
{
  Raster<P, T> out(box.w, box.h);
  for (int y = 0; y < box.h; ++y) {
    std::copy_n(src.row(box.y + y) + box.x, box.w, out.row(y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Errors

/// Malformed file content. `position` is a byte offset for images and a
/// 1-based line number for ground-truth sidecars.
class FormatError : public std::runtime_error
{
public:
  enum class Kind
  {
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedData,
    BadMagic,
    BadLine,
  };

  FormatError(Kind kind, std::size_t position, const std::string & what)
  : std::runtime_error(what), kind_{kind}, position_{position} {}

  Kind kind() const {return kind_;}
  std::size_t position() const {return position_;}

private:
  Kind kind_;
  std::size_t position_;
};

/// The file could not be opened, read or written.
class IoError : public std::runtime_error
{
public:
  IoError(const std::filesystem::path & path, const std::string & what)
  : std::runtime_error(path.string() + ": " + what), path_{path} {}

  const std::filesystem::path & path() const {return path_;}

private:
  std::filesystem::path path_;
};

class BoxOutOfBounds : public std::out_of_range
{
public:
  explicit BoxOutOfBounds(std::size_t index)
  : std::out_of_range("box " + std::to_string(index) + " lies outside the image"), index_{index} {}

  std::size_t index() const {return index_;}

private:
  std::size_t index_;
};

// ---------------------------------------------------------------------------
// Netpbm (binary P5 / P6, maxval 255)

namespace detail {

inline std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError(path, "read failed");
  }
  return bytes;
}

inline void write_file(const std::filesystem::path & path, std::string_view bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(path, "cannot open for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw IoError(path, "write failed");
  }
}

inline bool is_space(char c)
{
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class PnmHeaderReader
{
public:
  explicit PnmHeaderReader(std::string_view bytes)
  : bytes_{bytes} {}

  char magic()
  {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '5' && bytes_[1] != '6')) {
      throw FormatError(FormatError::Kind::MalformedHeader, 0, "expected P5 or P6 magic");
    }
    pos_ = 2;
    return bytes_[1];
  }

  long number()
  {
    skip_space_and_comments();
    const std::size_t start = pos_;
    last_start_ = start;
    long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        throw FormatError(FormatError::Kind::MalformedHeader, start, "header value too large");
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw FormatError(
              FormatError::Kind::MalformedHeader, start,
              "expected decimal header field at byte " + std::to_string(start));
    }
    return value;
  }

  /// Consume the single whitespace byte that ends the header.
  std::size_t end_of_header()
  {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw FormatError(
              FormatError::Kind::MalformedHeader, pos_,
              "expected whitespace after maxval at byte " + std::to_string(pos_));
    }
    return ++pos_;
  }

  std::size_t position() const {return pos_;}
  /// Offset of the first digit of the most recent number().
  std::size_t last_start() const {return last_start_;}

private:
  void skip_space_and_comments()
  {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
  std::size_t last_start_ = 0;
};

inline std::string pnm_header(char kind, int width, int height)
{
  std::ostringstream header;
  header << 'P' << kind << '\n' << width << ' ' << height << "\n255\n";
  return header.str();
}

}  // namespace detail

/// ITU-R 601 luma, rounded half up, in exact integer arithmetic.
inline std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b)
{
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// Decode an in-memory P5 (passthrough) or P6 (converted to luma) image.
inline GrayImage decode_gray(std::string_view bytes)
{
  detail::PnmHeaderReader reader(bytes);
  const char kind = reader.magic();
  const long width = reader.number();
  const std::size_t width_at = reader.last_start();
  const long height = reader.number();
  if (width < 1 || height < 1 || width > 65535 || height > 65535) {
    throw FormatError(
            FormatError::Kind::MalformedHeader, width_at,
            "image dimensions must be in [1, 65535], header at byte " + std::to_string(width_at));
  }
  const long maxval = reader.number();
  const std::size_t maxval_at = reader.last_start();
  if (maxval != 255) {
    throw FormatError(
            FormatError::Kind::UnsupportedMaxval, maxval_at,
            "only maxval 255 is supported, got " + std::to_string(maxval) + " near byte " +
            std::to_string(maxval_at));
  }
  const std::size_t offset = reader.end_of_header();
  const std::size_t channels = kind == '6' ? 3 : 1;
  const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t needed = pixels * channels;
  if (bytes.size() - offset < needed) {
    throw FormatError(
            FormatError::Kind::TruncatedData, bytes.size(),
            "pixel data ends at byte " + std::to_string(bytes.size()) + ", expected " +
            std::to_string(offset + needed));
  }

  GrayImage img(static_cast<int>(width), static_cast<int>(height));
  const auto * src = reinterpret_cast<const std::uint8_t *>(bytes.data() + offset);
  auto & dst = img.data();
  if (channels == 1) {
    std::copy_n(src, pixels, dst.begin());
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      dst[i] = luminance(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    }
  }
  return img;
}

inline GrayImage load_gray(const std::filesystem::path & path)
{
  return decode_gray(detail::read_file(path));
}

inline std::string encode_pgm(const GrayImage & img)
{
  std::string out = detail::pnm_header('5', img.width(), img.height());
  out.append(reinterpret_cast<const char *>(img.data().data()), img.size());
  return out;
}

inline std::string encode_ppm(const RgbImage & img)
{
  std::string out = detail::pnm_header('6', img.width(), img.height());
  out.reserve(out.size() + 3 * img.size());
  for (const Rgb & p : img.data()) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

inline void save_gray(const GrayImage & img, const std::filesystem::path & path)
{
  detail::write_file(path, encode_pgm(img));
}

inline void save_rgb(const RgbImage & img, const std::filesystem::path & path)
{
  detail::write_file(path, encode_ppm(img));
}

// ---------------------------------------------------------------------------
// "WSGT 1" ground-truth sidecar: magic line, then one "x y w h" per line.

inline BoxList parse_truth(std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "WSGT 1") {
    throw FormatError(FormatError::Kind::BadMagic, 1, "expected \"WSGT 1\" on line 1");
  }
  BoxList boxes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream fields(line);
    Box b;
    std::string rest;
    if (!(fields >> b.x >> b.y >> b.w >> b.h) || (fields >> rest) || b.w < 1 || b.h < 1) {
      throw FormatError(
              FormatError::Kind::BadLine, line_no,
              "line " + std::to_string(line_no) + ": expected \"x y w h\" with w, h >= 1");
    }
    boxes.push_back(b);
  }
  return boxes;
}

inline std::string format_truth(const BoxList & boxes)
{
  std::ostringstream out;
  out << "WSGT 1\n";
  for (const Box & b : boxes) {
    out << b.x << ' ' << b.y << ' ' << b.w << ' ' << b.h << '\n';
  }
  return out.str();
}

inline BoxList read_truth(const std::filesystem::path & path)
{
  return parse_truth(detail::read_file(path));
}

inline void write_truth(const BoxList & boxes, const std::filesystem::path & path)
{
  detail::write_file(path, format_truth(boxes));
}

// ---------------------------------------------------------------------------

/// Gray page replicated to RGB with a 1-px pure red outline around each box.
inline RgbImage render_overlay(const GrayImage & img, const BoxList & boxes)
{
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!boxes[i].inside(img.width(), img.height())) {
      throw BoxOutOfBounds(i);
    }
  }
  RgbImage out(img.width(), img.height());
  std::transform(
    img.data().begin(), img.data().end(), out.data().begin(),
    [](std::uint8_t v) {return Rgb{v, v, v};});

  const Rgb red{255, 0, 0};
  for (const Box & b : boxes) {
    for (int x = b.x; x < b.right(); ++x) {
      out.at(x, b.y) = red;
      out.at(x, b.bottom() - 1) = red;
    }
    for (int y = b.y; y < b.bottom(); ++y) {
      out.at(b.x, y) = red;
      out.at(b.right() - 1, y) = red;
    }
  }
  return out;
}

}  // namespace wseg
