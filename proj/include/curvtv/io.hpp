#pragma once

#include <png.h>

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvtv/curvature.hpp"
#include "curvtv/image.hpp"
#include "curvtv/solver.hpp"

namespace curvtv {

class ImageIoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ImageFormat { png, pgm, ppm };

/// Format from the file extension (.png, .pgm, .ppm; case-insensitive).
inline ImageFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return ImageFormat::png;
  if (ext == ".pgm") return ImageFormat::pgm;
  if (ext == ".ppm") return ImageFormat::ppm;
  throw ImageIoError("unsupported image format '" + ext + "' for " + path.string());
}

namespace detail {

inline std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Interleaved 8-bit samples -> planar real image.
inline Image from_interleaved(const unsigned char* src, std::size_t w, std::size_t h, std::size_t ch) {
  Image img(w, h, ch);
  for (std::size_t c = 0; c < ch; ++c) {
    auto plane = img.plane(c);
    for (std::size_t k = 0; k < w * h; ++k) plane[k] = static_cast<double>(src[k * ch + c]);
  }
  return img;
}

/// Clamp to [0, 255] and round half-to-even.
inline unsigned char quantize(double v) {
  const double c = std::clamp(v, 0.0, 255.0);
  const int prev = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double r = std::nearbyint(c);
  std::fesetround(prev);
  return static_cast<unsigned char>(r);
}

inline std::vector<unsigned char> to_interleaved(const Image& img) {
  const std::size_t n = img.pixels(), ch = img.channels();
  std::vector<unsigned char> out(n * ch);
  for (std::size_t c = 0; c < ch; ++c) {
    auto plane = img.plane(c);
    for (std::size_t k = 0; k < n; ++k) out[k * ch + c] = quantize(plane[k]);
  }
  return out;
}

// Netpbm header token reader that tracks the byte offset for diagnostics.
class PnmCursor {
public:
  PnmCursor(const std::vector<unsigned char>& bytes, const std::string& name) : b_(bytes), name_(name) {}

  std::size_t offset() const { return pos_; }

  unsigned long next_number() {
    skip_space_and_comments();
    if (pos_ >= b_.size()) fail("unexpected end of header");
    if (!std::isdigit(b_[pos_])) fail("expected a decimal number in header");
    unsigned long v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + static_cast<unsigned long>(b_[pos_] - '0');
      if (v > 1u << 24) fail("header value too large");
      ++pos_;
    }
    return v;
  }

  void single_whitespace() {
    if (pos_ >= b_.size() || !std::isspace(b_[pos_])) fail("expected whitespace after header");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ImageIoError(name_ + ": " + what + " at byte offset " + std::to_string(pos_));
  }

private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& b_;
  std::string name_;
  std::size_t pos_ = 2;
};

inline Image load_pnm(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string name = path.string();
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw ImageIoError(name + ": not a binary PGM/PPM file (bad magic at byte offset 0)");
  const std::size_t ch = bytes[1] == '5' ? 1 : 3;
  PnmCursor cur(bytes, name);
  const auto w = cur.next_number();
  const auto h = cur.next_number();
  const auto maxval = cur.next_number();
  if (w == 0 || h == 0) cur.fail("zero image dimension");
  if (maxval != 255) cur.fail("unsupported bit depth (maxval " + std::to_string(maxval) + ", need 255)");
  cur.single_whitespace();
  const std::size_t start = cur.offset();
  const std::size_t need = w * h * ch;
  if (bytes.size() - start < need)
    throw ImageIoError(name + ": truncated pixel data at byte offset " + std::to_string(bytes.size()) +
                       " (expected " + std::to_string(start + need) + " bytes)");
  return from_interleaved(bytes.data() + start, w, h, ch);
}

inline void save_pnm(const Image& img, const std::filesystem::path& path, ImageFormat fmt) {
  const bool gray = fmt == ImageFormat::pgm;
  if (gray != (img.channels() == 1))
    throw ImageIoError(path.string() + ": " + (gray ? "PGM needs 1 channel" : "PPM needs 3 channels"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write " + path.string());
  out << (gray ? "P5" : "P6") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  const auto px = to_interleaved(img);
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw ImageIoError("write failed for " + path.string());
}

inline Image load_png(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  png_image im{};
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&im, bytes.data(), bytes.size()))
    throw ImageIoError(path.string() + ": PNG header error (" + im.message + ") in " +
                       std::to_string(bytes.size()) + "-byte file");
  if (im.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&im);
    throw ImageIoError(path.string() + ": unsupported bit depth (16-bit PNG)");
  }
  const bool color = (im.format & PNG_FORMAT_FLAG_COLOR) != 0;
  im.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(im));
  if (!png_image_finish_read(&im, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = im.message;
    png_image_free(&im);
    throw ImageIoError(path.string() + ": PNG decode error (" + msg + ") in " + std::to_string(bytes.size()) +
                       "-byte file");
  }
  return from_interleaved(buf.data(), im.width, im.height, color ? 3 : 1);
}

inline void save_png(const Image& img, const std::filesystem::path& path) {
  png_image im{};
  im.version = PNG_IMAGE_VERSION;
  im.width = static_cast<png_uint_32>(img.width());
  im.height = static_cast<png_uint_32>(img.height());
  im.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const auto px = to_interleaved(img);
  if (!png_image_write_to_file(&im, path.string().c_str(), 0, px.data(), 0, nullptr))
    throw ImageIoError("cannot write " + path.string() + ": " + im.message);
}

} // namespace detail

/// Loads an 8-bit PNG/PGM/PPM into a real-valued image on [0, 255].
inline Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ImageIoError("no such file: " + path.string());
  return format_from_path(path) == ImageFormat::png ? detail::load_png(path) : detail::load_pnm(path);
}

/// Clamps to [0, 255], rounds half-to-even and writes an 8-bit file.
inline void save_image(const Image& img, const std::filesystem::path& path) {
  if (!img.all_finite()) throw std::invalid_argument("save_image: non-finite image");
  const auto fmt = format_from_path(path);
  if (fmt == ImageFormat::png) detail::save_png(img, path);
  else detail::save_pnm(img, path, fmt);
}

/// Pixels >= 128 are observed, darker ones belong to the inpainting domain.
inline InpaintMask mask_from_image(const Image& img) {
  if (img.channels() != 1) throw ImageIoError("mask must be a grayscale image");
  std::vector<bool> known(img.pixels());
  auto v = img.values();
  for (std::size_t k = 0; k < known.size(); ++k) known[k] = v[k] >= 128.0;
  if (std::none_of(known.begin(), known.end(), [](bool b) { return b; }))
    throw ImageIoError("mask has no known pixels");
  return InpaintMask(img.width(), img.height(), std::move(known));
}

inline InpaintMask load_mask(const std::filesystem::path& path) { return mask_from_image(load_image(path)); }

/// Linear rescale of [min, max] to [0, 255] for viewing; flat maps go to 0.
inline Image rescale_for_display(const Image& img) {
  auto v = img.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  Image out(img.width(), img.height(), img.channels());
  const double span = *hi - *lo;
  auto o = out.values();
  for (std::size_t k = 0; k < v.size(); ++k) o[k] = span > 0.0 ? 255.0 * (v[k] - *lo) / span : 0.0;
  return out;
}

/// Whitespace-separated text grid, one image row per line, full precision.
inline void save_raw_grid(const Image& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ImageIoError("cannot write " + path.string());
  out.precision(17);
  for (std::size_t i = 0; i < grid.height(); ++i) {
    for (std::size_t j = 0; j < grid.width(); ++j) out << (j ? " " : "") << grid(i, j);
    out << '\n';
  }
}

inline Image load_raw_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ImageIoError("cannot open " + path.string());
  std::vector<double> vals;
  std::size_t width = 0, height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::size_t n = 0;
    double x;
    while (row >> x) {
      vals.push_back(x);
      ++n;
    }
    if (width == 0) width = n;
    else if (n != width) throw ImageIoError(path.string() + ": ragged row " + std::to_string(height + 1));
    ++height;
  }
  if (width == 0) throw ImageIoError(path.string() + ": empty grid");
  return Image(width, height, std::move(vals));
}

inline constexpr const char* kTraceHeader = "iter,energy,residual_l1,rel_err_u,rel_err_lambda,delta_k,time_ms";

namespace detail {
inline std::string fmt_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace detail

/// Comma-separated trace, header `kTraceHeader`; delta_k blank when not tracked.
inline void write_trace(const IterationTrace& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.iter << ',' << detail::fmt_real(r.energy) << ',' << detail::fmt_real(r.residual_l1) << ','
        << detail::fmt_real(r.rel_err_u) << ',' << detail::fmt_real(r.rel_err_lambda) << ','
        << (r.delta_k ? detail::fmt_real(*r.delta_k) : std::string()) << ',' << detail::fmt_real(r.time_ms)
        << '\n';
  }
}

inline void write_trace(const IterationTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ImageIoError("cannot write " + path.string());
  write_trace(trace, out);
}

} // namespace curvtv
