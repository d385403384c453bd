#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "curvtv/image.hpp"

namespace curvtv::synthetic {

/// Piecewise-constant test scene on a 0-255 scale: a disk, a square, a
/// triangle and a thin bar over a flat background. Geometry scales with the
/// image size so different resolutions show the same scene.
inline Image shapes(std::size_t width, std::size_t height) {
  Image img(width, height, 1, 60.0);
  const double W = static_cast<double>(width), H = static_cast<double>(height);
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      const double y = (static_cast<double>(i) + 0.5) / H;  // row coordinate in [0, 1)
      const double x = (static_cast<double>(j) + 0.5) / W;
      double v = 60.0;
      if (x > 0.55 && x < 0.9 && y > 0.1 && y < 0.45) v = 130.0;
      if ((x - 0.3) * (x - 0.3) + (y - 0.3) * (y - 0.3) < 0.04) v = 200.0;
      // triangle with apex at (0.3, 0.55) and base on y = 0.9
      if (y > 0.55 && y < 0.9 && std::abs(x - 0.3) < 0.5 * (y - 0.55)) v = 170.0;
      if (x > 0.6 && x < 0.85 && y > 0.62 && y < 0.7) v = 25.0;
      if ((x - 0.72) * (x - 0.72) + (y - 0.82) * (y - 0.82) < 0.006) v = 230.0;
      img(i, j) = v;
    }
  }
  return img;
}

/// Uniform random inpainting mask with exactly floor(fraction * N) missing
/// pixels (false = missing).
inline std::vector<bool> random_missing(std::size_t width, std::size_t height, double fraction, std::uint64_t seed) {
  const std::size_t n = width * height;
  const auto missing = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < missing; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  std::vector<bool> known(n, true);
  for (std::size_t k = 0; k < missing; ++k) known[idx[k]] = false;
  return known;
}

inline Image checkerboard(std::size_t width, std::size_t height, std::size_t cell = 1) {
  Image img(width, height);
  for (std::size_t i = 0; i < height; ++i)
    for (std::size_t j = 0; j < width; ++j) img(i, j) = ((i / cell + j / cell) % 2 == 0) ? 255.0 : 0.0;
  return img;
}

} // namespace curvtv::synthetic
