#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvtv {

/// Grid layout used everywhere in this library: row index i runs over the
/// image height, column index j over the width, and samples are stored
/// row-major, so pixel (i, j) lives at offset i * width + j. Multi-channel
/// images are planar: channel c occupies its own contiguous width*height
/// block.
class Image {
public:
  Image() = default;

  Image(std::size_t width, std::size_t height, std::size_t channels = 1, double fill = 0.0)
      : width_(width), height_(height), channels_(channels),
        data_(width * height * channels, fill) {
    if (width == 0 || height == 0)
      throw std::invalid_argument("Image: dimensions must be positive");
    if (channels != 1 && channels != 3)
      throw std::invalid_argument("Image: channel count must be 1 or 3");
  }

  Image(std::size_t width, std::size_t height, std::vector<double> data, std::size_t channels = 1)
      : Image(width, height, channels) {
    if (data.size() != width * height * channels)
      throw std::invalid_argument("Image: data length does not match width*height*channels");
    data_ = std::move(data);
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixels() const noexcept { return width_ * height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t c = 0) {
    return data_[c * pixels() + i * width_ + j];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t c = 0) const {
    return data_[c * pixels() + i * width_ + j];
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::span<double> plane(std::size_t c) { return values().subspan(c * pixels(), pixels()); }
  std::span<const double> plane(std::size_t c) const {
    return values().subspan(c * pixels(), pixels());
  }

  /// Single-channel copy of channel c.
  Image channel(std::size_t c) const {
    if (c >= channels_) throw std::out_of_range("Image::channel: index out of range");
    auto p = plane(c);
    return Image(width_, height_, std::vector<double>(p.begin(), p.end()));
  }

  void set_channel(std::size_t c, const Image& src) {
    if (c >= channels_) throw std::out_of_range("Image::set_channel: index out of range");
    if (src.width_ != width_ || src.height_ != height_ || src.channels_ != 1)
      throw std::invalid_argument("Image::set_channel: shape mismatch");
    std::copy(src.data_.begin(), src.data_.end(), plane(c).begin());
  }

  bool same_shape(const Image& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const Image&, const Image&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

/// Per-pixel 2-vector field. `x` holds the component along rows (index i),
/// `y` the component along columns (index j).
struct VectorField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> x;
  std::vector<double> y;

  VectorField() = default;
  VectorField(std::size_t w, std::size_t h, double fill = 0.0)
      : width(w), height(h), x(w * h, fill), y(w * h, fill) {
    if (w == 0 || h == 0)
      throw std::invalid_argument("VectorField: dimensions must be positive");
  }

  std::size_t pixels() const noexcept { return width * height; }

  void check_consistent() const {
    if (x.size() != width * height || y.size() != width * height)
      throw std::invalid_argument("VectorField: component length does not match dimensions");
  }

  bool all_finite() const noexcept {
    auto fin = [](double v) { return std::isfinite(v); };
    return std::all_of(x.begin(), x.end(), fin) && std::all_of(y.begin(), y.end(), fin);
  }

  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Observed-pixel mask for inpainting; `known[k]` is true where data exists.
class InpaintMask {
public:
  InpaintMask(std::size_t width, std::size_t height, std::vector<bool> known)
      : width_(width), height_(height), known_(std::move(known)) {
    if (width == 0 || height == 0)
      throw std::invalid_argument("InpaintMask: dimensions must be positive");
    if (known_.size() != width * height)
      throw std::invalid_argument("InpaintMask: mask length does not match dimensions");
    if (std::none_of(known_.begin(), known_.end(), [](bool b) { return b; }))
      throw std::invalid_argument("InpaintMask: mask has no known pixels");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool known(std::size_t k) const { return known_[k]; }
  bool known(std::size_t i, std::size_t j) const { return known_[i * width_ + j]; }

  std::size_t unknown_count() const noexcept {
    return static_cast<std::size_t>(std::count(known_.begin(), known_.end(), false));
  }
  double unknown_fraction() const noexcept {
    return static_cast<double>(unknown_count()) / static_cast<double>(known_.size());
  }

private:
  std::size_t width_;
  std::size_t height_;
  std::vector<bool> known_;
};

namespace detail {

inline void require_single_channel(const Image& u, const char* who) {
  if (u.channels() != 1)
    throw std::invalid_argument(std::string(who) + ": expected a single-channel image");
}

inline void require_same_grid(std::size_t w1, std::size_t h1, std::size_t w2, std::size_t h2,
                              const char* who) {
  if (w1 != w2 || h1 != h2)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

} // namespace detail

} // namespace curvtv
