#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "curvtv/operators.hpp"
#include "curvtv/spectral.hpp"

using namespace curvtv;

namespace {

Image random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-100.0, 255.0);
  Image img(w, h);
  for (double& v : img.values()) v = d(rng);
  return img;
}

// ||(a I - b Lap) u - rhs||_inf, evaluated with the spatial stencil.
double residual(double a, double b, const Image& u, const Image& rhs) {
  const Image lap = apply_laplacian(u);
  double r = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    r = std::max(r, std::abs(a * u.values()[k] - b * lap.values()[k] - rhs.values()[k]));
  return r;
}

double inf_norm(const Image& u) {
  double m = 0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

} // namespace

TEST(SpectralSolve, IdentitySystem) {
  const Image rhs = random_image(9, 7, 1);
  const Image u = spectral_solve(1.0, 0.0, rhs);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(u.values()[k], rhs.values()[k], 1e-12);
}

TEST(SpectralSolve, ConstantRhs) {
  const Image u = spectral_solve(2.0, 1.0, Image(16, 12, 1, 50.0));
  for (double v : u.values()) EXPECT_NEAR(v, 25.0, 1e-12);
}

TEST(SpectralSolve, SingleCosineMode) {
  const std::size_t n = 8;
  for (std::size_t q = 0; q < n; ++q) {
    Image rhs(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        rhs(i, j) = std::cos(2 * std::numbers::pi * double(q) * double(j) / double(n));
    const double eig = 2 * std::cos(2 * std::numbers::pi * double(q) / double(n)) - 2;
    const Image u = spectral_solve(1.0, 1.0, rhs);
    for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(u.values()[k], rhs.values()[k] / (1 - eig), 1e-12);
    EXPECT_LE(residual(1.0, 1.0, u, rhs), 1e-12);
  }
}

TEST(SpectralSolve, ResidualOnRandomRectangularGrids) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  std::uniform_real_distribution<double> coef(0.01, 10.0);
  for (int t = 0; t < 60; ++t) {
    const std::size_t w = dim(rng), h = dim(rng);
    const double a = coef(rng), b = coef(rng);
    const Image rhs = random_image(w, h, rng());
    const Image u = spectral_solve(a, b, rhs);
    EXPECT_LE(residual(a, b, u, rhs), 1e-8 * std::max(1.0, inf_norm(rhs))) << w << "x" << h;
  }
}

TEST(SpectralSolve, RejectsBadCoefficients) {
  const Image rhs(4, 4);
  EXPECT_THROW(spectral_solve(0.0, 1.0, rhs), std::invalid_argument);
  EXPECT_THROW(spectral_solve(-1.0, 1.0, rhs), std::invalid_argument);
  EXPECT_THROW(spectral_solve(1.0, -1.0, rhs), std::invalid_argument);
  SpectralSolver s(4, 4);
  EXPECT_THROW(s.solve(1.0, 1.0, Image(5, 4)), std::invalid_argument);
}

TEST(SpectralSolve, ReusedSolverIsDeterministicAcrossThreads) {
  const Image rhs = random_image(64, 48, 5);
  const Image ref = spectral_solve(0.3, 2.0, rhs);
  std::vector<Image> out(4);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < out.size(); ++t)
    pool.emplace_back([&, t] {
      SpectralSolver s(64, 48);
      s.solve(1.0, 1.0, rhs);
      out[t] = s.solve(0.3, 2.0, rhs);
    });
  for (auto& th : pool) th.join();
  for (const auto& o : out) EXPECT_EQ(o, ref);
}
