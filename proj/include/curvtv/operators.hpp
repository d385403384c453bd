#pragma once

#include <cmath>
#include <numbers>

#include "curvtv/image.hpp"

namespace curvtv {

/// Forward differences with periodic wrap: x along rows (i+1 mod height),
/// y along columns (j+1 mod width).
inline VectorField gradient_forward(const Image& u) {
  detail::require_single_channel(u, "gradient_forward");
  const std::size_t w = u.width(), h = u.height();
  VectorField g(w, h);
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t ip = (i + 1 == h) ? 0 : i + 1;
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t jp = (j + 1 == w) ? 0 : j + 1;
      const double c = u(i, j);
      g.x[i * w + j] = u(ip, j) - c;
      g.y[i * w + j] = u(i, jp) - c;
    }
  }
  return g;
}

/// Backward differences with periodic wrap; the negative adjoint of
/// gradient_forward.
inline Image divergence(const VectorField& p) {
  p.check_consistent();
  const std::size_t w = p.width, h = p.height;
  Image d(w, h);
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t im = (i == 0) ? h - 1 : i - 1;
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t jm = (j == 0) ? w - 1 : j - 1;
      d(i, j) = (p.x[i * w + j] - p.x[im * w + j]) + (p.y[i * w + j] - p.y[i * w + jm]);
    }
  }
  return d;
}

/// Periodic 5-point Laplacian, equal to divergence(gradient_forward(u)).
inline Image apply_laplacian(const Image& u) {
  detail::require_single_channel(u, "apply_laplacian");
  const std::size_t w = u.width(), h = u.height();
  Image out(w, h);
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t ip = (i + 1 == h) ? 0 : i + 1;
    const std::size_t im = (i == 0) ? h - 1 : i - 1;
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t jp = (j + 1 == w) ? 0 : j + 1;
      const std::size_t jm = (j == 0) ? w - 1 : j - 1;
      out(i, j) = u(ip, j) + u(im, j) + u(i, jp) + u(i, jm) - 4.0 * u(i, j);
    }
  }
  return out;
}

/// Eigenvalues of the periodic 5-point Laplacian: entry (p, q) is
/// 2cos(2*pi*p/height) + 2cos(2*pi*q/width) - 4.
inline Image laplacian_symbol(std::size_t width, std::size_t height) {
  Image s(width, height);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t p = 0; p < height; ++p) {
    const double cp = 2.0 * std::cos(two_pi * static_cast<double>(p) / static_cast<double>(height));
    for (std::size_t q = 0; q < width; ++q) {
      const double cq = 2.0 * std::cos(two_pi * static_cast<double>(q) / static_cast<double>(width));
      s(p, q) = cp + cq - 4.0;
    }
  }
  return s;
}

/// Sum of per-pixel products of two fields.
inline double inner(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k) s += a.x[k] * b.x[k] + a.y[k] * b.y[k];
  return s;
}

inline double inner(const Image& a, const Image& b) {
  double s = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
  return s;
}

} // namespace curvtv
