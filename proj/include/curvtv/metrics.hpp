#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "curvtv/image.hpp"

namespace curvtv {

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
};

inline double mse(const Image& ref, const Image& test) {
  if (!ref.same_shape(test)) throw std::invalid_argument("mse: dimension mismatch");
  auto a = ref.values(), b = test.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s / static_cast<double>(a.size());
}

/// 10 log10(peak^2 / MSE) over all samples; +inf when the images agree.
inline double psnr(const Image& ref, const Image& test, double peak = 255.0) {
  const double m = mse(ref, test);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / m);
}

struct SsimParams {
  int radius = 5;  // 11x11 window
  double gauss_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

namespace detail {

inline std::vector<double> gaussian_taps(int radius, double sigma) {
  std::vector<double> t(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    t[static_cast<std::size_t>(k + radius)] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    sum += t[static_cast<std::size_t>(k + radius)];
  }
  for (double& x : t) x /= sum;
  return t;
}

// Separable 'valid' filtering of a single plane.
inline std::vector<double> filter_valid(std::span<const double> src, std::size_t w, std::size_t h,
                                        const std::vector<double>& taps) {
  const std::size_t n = taps.size();
  const std::size_t ow = w - n + 1, oh = h - n + 1;
  std::vector<double> rows(h * ow, 0.0);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < ow; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t) s += taps[t] * src[i * w + j + t];
      rows[i * ow + j] = s;
    }
  std::vector<double> out(oh * ow, 0.0);
  for (std::size_t i = 0; i < oh; ++i)
    for (std::size_t j = 0; j < ow; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t) s += taps[t] * rows[(i + t) * ow + j];
      out[i * ow + j] = s;
    }
  return out;
}

inline double ssim_plane(std::span<const double> x, std::span<const double> y, std::size_t w, std::size_t h,
                         const SsimParams& p) {
  const auto taps = gaussian_taps(p.radius, p.gauss_sigma);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    xx[k] = x[k] * x[k];
    yy[k] = y[k] * y[k];
    xy[k] = x[k] * y[k];
  }
  const auto mx = filter_valid(x, w, h, taps);
  const auto my = filter_valid(y, w, h, taps);
  const auto sxx = filter_valid(xx, w, h, taps);
  const auto syy = filter_valid(yy, w, h, taps);
  const auto sxy = filter_valid(xy, w, h, taps);
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  double total = 0.0;
  for (std::size_t k = 0; k < mx.size(); ++k) {
    const double vx = sxx[k] - mx[k] * mx[k];
    const double vy = syy[k] - my[k] * my[k];
    const double cov = sxy[k] - mx[k] * my[k];
    const double num = (2.0 * mx[k] * my[k] + c1) * (2.0 * cov + c2);
    const double den = (mx[k] * mx[k] + my[k] * my[k] + c1) * (vx + vy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

} // namespace detail

/// Mean structural similarity over a Gaussian-weighted sliding window
/// (valid region only); colour images average the per-channel scores.
inline double ssim(const Image& ref, const Image& test, const SsimParams& params = {}) {
  if (!ref.same_shape(test)) throw std::invalid_argument("ssim: dimension mismatch");
  const auto win = static_cast<std::size_t>(2 * params.radius + 1);
  if (ref.width() < win || ref.height() < win)
    throw std::invalid_argument("ssim: image smaller than the " + std::to_string(win) + "x" +
                                std::to_string(win) + " window");
  // SSIM(x, x) is 1 by definition; skip the rounding of the windowed sums.
  if (ref == test) return 1.0;
  double s = 0.0;
  for (std::size_t c = 0; c < ref.channels(); ++c)
    s += detail::ssim_plane(ref.plane(c), test.plane(c), ref.width(), ref.height(), params);
  return s / static_cast<double>(ref.channels());
}

inline MetricReport evaluate(const Image& ref, const Image& test) {
  return {psnr(ref, test), ssim(ref, test), mse(ref, test)};
}

/// ||a - b||_1 / ||b||_1, +inf when b vanishes.
inline double rel_err_l1(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rel_err_l1: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::abs(a[k] - b[k]);
    den += std::abs(b[k]);
  }
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

inline double rel_err_l1(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("rel_err_l1: shape mismatch");
  return rel_err_l1(a.values(), b.values());
}

inline double rel_err_l1(const VectorField& a, const VectorField& b) {
  if (a.width != b.width || a.height != b.height) throw std::invalid_argument("rel_err_l1: shape mismatch");
  std::vector<double> av(a.x), bv(b.x);
  av.insert(av.end(), a.y.begin(), a.y.end());
  bv.insert(bv.end(), b.y.begin(), b.y.end());
  return rel_err_l1(av, bv);
}

} // namespace curvtv
