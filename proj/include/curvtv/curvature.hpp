#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "curvtv/image.hpp"

namespace curvtv {

enum class CurvatureKind { mean, gaussian };

/// tac: 1 + alpha|k|, tsc: 1 + alpha k^2, trv: sqrt(1 + alpha k^2), tv: 1.
enum class WeightKind { tac, tsc, trv, tv };

struct CurvatureSpec {
  CurvatureKind curvature = CurvatureKind::gaussian;
  WeightKind weight = WeightKind::tac;
  double alpha = 5.0;
  double h = 1.0;

  void validate() const {
    if (!(alpha >= 0.0)) throw std::invalid_argument("CurvatureSpec: alpha must be nonnegative");
    if (!(h > 0.0)) throw std::invalid_argument("CurvatureSpec: step h must be positive");
  }
  double effective_alpha() const noexcept { return weight == WeightKind::tv ? 0.0 : alpha; }
};

template <class Tag>
struct ScalarGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;

  ScalarGrid() = default;
  ScalarGrid(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), values(w * h, fill) {}

  double operator()(std::size_t i, std::size_t j) const { return values[i * width + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * width + j]; }

  Image to_image() const { return Image(width, height, values); }

  friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;
};

struct CurvatureTag {};
struct WeightTag {};
using CurvatureMap = ScalarGrid<CurvatureTag>;
using WeightMap = ScalarGrid<WeightTag>;

/// 3x3 neighbourhood; at(di, dj) is u(i + di, j + dj) for di, dj in {-1, 0, 1}.
struct Patch3x3 {
  std::array<double, 9> v{};

  double at(int di, int dj) const { return v[static_cast<std::size_t>((di + 1) * 3 + (dj + 1))]; }
  double& at(int di, int dj) { return v[static_cast<std::size_t>((di + 1) * 3 + (dj + 1))]; }

  bool all_finite() const {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  }
};

struct PrincipalCurvatures {
  double kmax = 0.0;
  double kmin = 0.0;
  double mean = 0.0;
  double gaussian = 0.0;
};

namespace detail {

// Patch slots: NW N NE / W C E / SW S SE.
enum Slot : unsigned char { NW, N, NE, W, C, E, SW, S, SE };

struct Tap {
  unsigned char slot;
  double coef;
};

// Linear combination of at most three patch samples.
using Term = std::array<Tap, 3>;

constexpr Tap none{C, 0.0};

struct PlaneStencil {
  Term numerator;
  Term slope_a;
  Term slope_b;
  Slot neighbour;  // sample whose offset from C defines the arclength
  bool diagonal;
};

// Eight triangular tangent planes around the centre sample. Each distance is
// numerator / sqrt(slope_a^2 + slope_b^2 + 4).
inline constexpr std::array<PlaneStencil, 8> kPlanes{{
    {{{{C, 2}, {W, -1}, {E, -1}}}, {{{N, 2}, {W, -1}, {E, -1}}}, {{{W, 1}, {E, -1}, none}}, N, false},
    {{{{W, 1}, {E, 1}, {C, -2}}}, {{{S, 2}, {W, -1}, {E, -1}}}, {{{E, 1}, {W, -1}, none}}, S, false},
    {{{{N, 1}, {S, 1}, {C, -2}}}, {{{S, 1}, {N, -1}, none}}, {{{N, 1}, {S, 1}, {W, -2}}}, W, false},
    {{{{C, 2}, {N, -1}, {S, -1}}}, {{{N, 1}, {S, -1}, none}}, {{{N, 1}, {S, 1}, {E, -2}}}, E, false},
    {{{{NE, 1}, {SW, 1}, {C, -2}}}, {{{SW, 1}, {NW, -1}, none}}, {{{NE, 1}, {NW, -1}, none}}, NW, true},
    {{{{C, 2}, {NE, -1}, {SW, -1}}}, {{{NE, 1}, {SE, -1}, none}}, {{{SW, 1}, {SE, -1}, none}}, SE, true},
    {{{{C, 2}, {NW, -1}, {SE, -1}}}, {{{NE, 1}, {SE, -1}, none}}, {{{NW, 1}, {NE, -1}, none}}, NE, true},
    {{{{NW, 1}, {SE, 1}, {C, -2}}}, {{{SW, 1}, {NW, -1}, none}}, {{{SE, 1}, {SW, -1}, none}}, SW, true},
}};

inline double eval(const Term& t, const Patch3x3& p) {
  return t[0].coef * p.v[t[0].slot] + t[1].coef * p.v[t[1].slot] + t[2].coef * p.v[t[2].slot];
}

inline void require_finite(const Patch3x3& p, const char* who) {
  if (!p.all_finite()) throw std::invalid_argument(std::string(who) + ": non-finite patch value");
}

} // namespace detail

/// Signed distances from the centre surface point to its eight tangent
/// planes. Denominators are at least 2.
inline std::array<double, 8> tangent_plane_distances(const Patch3x3& patch) {
  detail::require_finite(patch, "tangent_plane_distances");
  std::array<double, 8> d{};
  for (std::size_t l = 0; l < 8; ++l) {
    const auto& pl = detail::kPlanes[l];
    const double a = detail::eval(pl.slope_a, patch);
    const double b = detail::eval(pl.slope_b, patch);
    d[l] = detail::eval(pl.numerator, patch) / std::sqrt(a * a + b * b + 4.0);
  }
  return d;
}

/// kappa_l = 2 d_l / ((u_l - u_c)^2 + h^2) on axial planes (1-4) and
/// 2 d_l / ((u_l - u_c)^2 + 2h^2) on diagonal planes (5-8).
inline std::array<double, 8> normal_curvatures(const Patch3x3& patch, double h = 1.0) {
  if (!(h > 0.0)) throw std::invalid_argument("normal_curvatures: step h must be positive");
  const auto d = tangent_plane_distances(patch);
  const double h2 = h * h;
  const double c = patch.v[detail::C];
  std::array<double, 8> k{};
  for (std::size_t l = 0; l < 8; ++l) {
    const auto& pl = detail::kPlanes[l];
    const double du = patch.v[pl.neighbour] - c;
    k[l] = 2.0 * d[l] / (du * du + (pl.diagonal ? 2.0 * h2 : h2));
  }
  return k;
}

inline PrincipalCurvatures principal_and_hk(const std::array<double, 8>& kappas) {
  if (!std::all_of(kappas.begin(), kappas.end(), [](double x) { return std::isfinite(x); }))
    throw std::invalid_argument("principal_and_hk: non-finite normal curvature");
  const auto [lo, hi] = std::minmax_element(kappas.begin(), kappas.end());
  PrincipalCurvatures pc;
  pc.kmax = *hi;
  pc.kmin = *lo;
  pc.mean = 0.5 * (pc.kmax + pc.kmin);
  pc.gaussian = pc.kmax * pc.kmin;
  return pc;
}

/// Replicate-padded 3x3 neighbourhood of (i, j).
inline Patch3x3 gather_patch(const Image& u, std::size_t i, std::size_t j) {
  const std::size_t h = u.height(), w = u.width();
  const std::size_t rows[3] = {i == 0 ? 0 : i - 1, i, i + 1 == h ? i : i + 1};
  const std::size_t cols[3] = {j == 0 ? 0 : j - 1, j, j + 1 == w ? j : j + 1};
  Patch3x3 p;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) p.v[a * 3 + b] = u(rows[a], cols[b]);
  return p;
}

/// Per-pixel mean or Gaussian curvature with replicate-padded borders.
inline CurvatureMap curvature_map(const Image& u, const CurvatureSpec& spec) {
  detail::require_single_channel(u, "curvature_map");
  spec.validate();
  if (!u.all_finite()) throw std::invalid_argument("curvature_map: non-finite image");
  CurvatureMap map(u.width(), u.height());
  for (std::size_t i = 0; i < u.height(); ++i) {
    for (std::size_t j = 0; j < u.width(); ++j) {
      const auto pc = principal_and_hk(normal_curvatures(gather_patch(u, i, j), spec.h));
      map(i, j) = spec.curvature == CurvatureKind::mean ? pc.mean : pc.gaussian;
    }
  }
  return map;
}

inline double weight_of(double kappa, WeightKind kind, double alpha) {
  switch (kind) {
  case WeightKind::tac: return 1.0 + alpha * std::abs(kappa);
  case WeightKind::tsc: return 1.0 + alpha * kappa * kappa;
  case WeightKind::trv: return std::sqrt(1.0 + alpha * kappa * kappa);
  case WeightKind::tv: return 1.0;
  }
  return 1.0;
}

inline WeightMap weight_map(const CurvatureMap& kmap, const CurvatureSpec& spec) {
  spec.validate();
  WeightMap wm(kmap.width, kmap.height);
  const double alpha = spec.effective_alpha();
  for (std::size_t k = 0; k < kmap.values.size(); ++k) {
    if (!std::isfinite(kmap.values[k])) throw std::invalid_argument("weight_map: non-finite curvature");
    wm.values[k] = weight_of(kmap.values[k], spec.weight, alpha);
  }
  return wm;
}

/// Curvature followed by weighting; tv skips the curvature pass entirely.
inline WeightMap curvature_weights(const Image& u, const CurvatureSpec& spec) {
  if (spec.weight == WeightKind::tv) {
    spec.validate();
    return WeightMap(u.width(), u.height(), 1.0);
  }
  return weight_map(curvature_map(u, spec), spec);
}

inline std::string_view to_string(CurvatureKind k) { return k == CurvatureKind::mean ? "mc" : "gc"; }

inline std::string_view to_string(WeightKind k) {
  switch (k) {
  case WeightKind::tac: return "tac";
  case WeightKind::tsc: return "tsc";
  case WeightKind::trv: return "trv";
  case WeightKind::tv: return "tv";
  }
  return "?";
}

} // namespace curvtv
