#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "curvtv/image.hpp"

namespace curvtv {

struct GaussianNoise {
  double sigma = 0.0;
};

/// Replaces floor(fraction * N) distinct samples: half with `low`, the rest
/// with `high`.
struct SaltPepperNoise {
  double fraction = 0.0;
  double low = 0.0;
  double high = 255.0;
};

/// Each sample drawn from Poisson(u) on the native intensity scale.
struct PoissonNoise {};

using NoiseModel = std::variant<GaussianNoise, SaltPepperNoise, PoissonNoise>;

namespace detail {

inline Image gaussian_noise(const Image& u, const GaussianNoise& m, std::mt19937_64& rng) {
  if (!(m.sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be nonnegative");
  Image out = u;
  if (m.sigma == 0.0) return out;
  std::normal_distribution<double> dist(0.0, m.sigma);
  for (double& v : out.values()) v += dist(rng);
  return out;
}

inline Image salt_pepper_noise(const Image& u, const SaltPepperNoise& m, std::mt19937_64& rng) {
  if (!(m.fraction >= 0.0 && m.fraction <= 1.0))
    throw std::invalid_argument("add_noise: salt-and-pepper fraction must lie in [0, 1]");
  Image out = u;
  auto vals = out.values();
  const std::size_t n = vals.size();
  const auto count = static_cast<std::size_t>(std::floor(m.fraction * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` entries end up a uniform sample.
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  const std::size_t pepper = count / 2;
  for (std::size_t k = 0; k < count; ++k) vals[idx[k]] = (k < pepper) ? m.low : m.high;
  return out;
}

inline Image poisson_noise(const Image& u, std::mt19937_64& rng) {
  for (double v : u.values())
    if (!(v >= 0.0)) throw std::invalid_argument("add_noise: Poisson noise needs nonnegative intensities");
  Image out = u;
  for (double& v : out.values()) {
    if (v == 0.0) continue;
    std::poisson_distribution<std::int64_t> dist(v);
    v = static_cast<double>(dist(rng));
  }
  return out;
}

} // namespace detail

/// Degrades `u` with the given model. Output is a pure function of
/// (u, model, seed).
inline Image add_noise(const Image& u, const NoiseModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::visit(
      [&](const auto& m) -> Image {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, GaussianNoise>) return detail::gaussian_noise(u, m, rng);
        else if constexpr (std::is_same_v<M, SaltPepperNoise>) return detail::salt_pepper_noise(u, m, rng);
        else return detail::poisson_noise(u, rng);
      },
      model);
}

} // namespace curvtv
