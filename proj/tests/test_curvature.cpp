#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "curvtv/curvature.hpp"
#include "oracles.hpp"

using namespace curvtv;

namespace {

Patch3x3 patch_from(const oracle::Sampler& s) {
  Patch3x3 p;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) p.at(a, b) = s(a, b);
  return p;
}

Patch3x3 spike() {
  Patch3x3 p;
  p.at(0, 0) = 1.0;
  return p;
}

Patch3x3 random_patch(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 255.0);
  Patch3x3 p;
  for (double& v : p.v) v = d(rng);
  return p;
}

Image random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 255.0);
  Image img(w, h);
  for (double& v : img.values()) v = d(rng);
  return img;
}

CurvatureSpec spec_for(CurvatureKind k) {
  CurvatureSpec s;
  s.curvature = k;
  return s;
}

} // namespace

TEST(TangentPlaneDistances, ConstantPatchIsFlat) {
  Patch3x3 p;
  p.v.fill(87.0);
  for (double d : tangent_plane_distances(p)) EXPECT_EQ(d, 0.0);
}

TEST(TangentPlaneDistances, PlanarRampIsFlat) {
  const auto p = patch_from([](int a, int b) { return 100.0 + 7.0 * a - 3.0 * b; });
  for (double d : tangent_plane_distances(p)) EXPECT_EQ(d, 0.0);
}

TEST(TangentPlaneDistances, UnitSpike) {
  const std::array<double, 8> expected{1, -1, -1, 1, -1, 1, 1, -1};
  const auto d = tangent_plane_distances(spike());
  for (int l = 0; l < 8; ++l) EXPECT_DOUBLE_EQ(d[l], expected[l]) << "plane " << l + 1;
}

TEST(TangentPlaneDistances, RejectsNonFinite) {
  Patch3x3 p;
  p.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(tangent_plane_distances(p), std::invalid_argument);
  p.at(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(normal_curvatures(p), std::invalid_argument);
}

TEST(NormalCurvatures, UnitSpike) {
  const auto k = normal_curvatures(spike(), 1.0);
  const std::array<double, 8> expected{1, -1, -1, 1, -2.0 / 3, 2.0 / 3, 2.0 / 3, -2.0 / 3};
  for (int l = 0; l < 8; ++l) EXPECT_DOUBLE_EQ(k[l], expected[l]) << "plane " << l + 1;
}

TEST(NormalCurvatures, FlatCasesAndStepValidation) {
  Patch3x3 c;
  c.v.fill(3.0);
  for (double k : normal_curvatures(c, 1.0)) EXPECT_EQ(k, 0.0);
  const auto ramp = patch_from([](int a, int) { return static_cast<double>(a); });
  for (double k : normal_curvatures(ramp, 1.0)) EXPECT_EQ(k, 0.0);
  EXPECT_THROW(normal_curvatures(c, 0.0), std::invalid_argument);
  EXPECT_THROW(normal_curvatures(c, -1.0), std::invalid_argument);
}

TEST(PrincipalAndHK, Examples) {
  const auto z = principal_and_hk({});
  EXPECT_EQ(z.kmax, 0.0);
  EXPECT_EQ(z.kmin, 0.0);
  EXPECT_EQ(z.mean, 0.0);
  EXPECT_EQ(z.gaussian, 0.0);

  const auto s = principal_and_hk(normal_curvatures(spike()));
  EXPECT_DOUBLE_EQ(s.kmax, 1.0);
  EXPECT_DOUBLE_EQ(s.kmin, -1.0);
  EXPECT_DOUBLE_EQ(s.mean, 0.0);
  EXPECT_DOUBLE_EQ(s.gaussian, -1.0);

  std::array<double, 8> same;
  same.fill(0.25);
  const auto u = principal_and_hk(same);
  EXPECT_EQ(u.kmax, 0.25);
  EXPECT_EQ(u.kmin, 0.25);
  EXPECT_EQ(u.mean, 0.25);
  EXPECT_EQ(u.gaussian, 0.0625);

  same[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(principal_and_hk(same), std::invalid_argument);
}

TEST(CurvaturePipeline, MatchesVerbatimFormulasOnRandomPatches) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> hd(0.25, 3.0);
  for (int t = 0; t < 10000; ++t) {
    const Patch3x3 p = random_patch(rng);
    const double h = (t % 2 == 0) ? 1.0 : hd(rng);
    const oracle::Sampler s = [&p](int a, int b) { return p.at(a, b); };
    const auto d = tangent_plane_distances(p);
    const auto k = normal_curvatures(p, h);
    const auto od = oracle::distances(s);
    const auto ok = oracle::kappas(s, h);
    for (int l = 0; l < 8; ++l) {
      ASSERT_NEAR(d[l], od[l], 1e-12);
      ASSERT_NEAR(k[l], ok[l], 1e-12);
    }
    const auto pc = principal_and_hk(k);
    const auto ohk = oracle::hk(ok);
    ASSERT_NEAR(pc.mean, ohk.H, 1e-12);
    ASSERT_NEAR(pc.gaussian, ohk.K, 1e-12);
  }
}

TEST(CurvaturePipeline, Boundedness) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    const Patch3x3 p = random_patch(rng);
    const oracle::Sampler s = [&p](int a, int b) { return p.at(a, b); };
    const auto d = tangent_plane_distances(p);
    const auto k = normal_curvatures(p, 1.0);
    // numerators are the second differences along each plane's arc
    const double c = p.at(0, 0);
    const std::array<double, 8> num{2 * c - s(0, -1) - s(0, 1), s(0, -1) + s(0, 1) - 2 * c,
                                    s(-1, 0) + s(1, 0) - 2 * c, 2 * c - s(-1, 0) - s(1, 0),
                                    s(-1, 1) + s(1, -1) - 2 * c, 2 * c - s(-1, 1) - s(1, -1),
                                    2 * c - s(-1, -1) - s(1, 1), s(-1, -1) + s(1, 1) - 2 * c};
    for (int l = 0; l < 8; ++l) {
      EXPECT_LE(std::abs(d[l]), std::abs(num[l]) / 2 + 1e-12);
      EXPECT_LE(std::abs(k[l]), 2 * std::abs(d[l]) + 1e-15);
    }
  }
}

TEST(CurvatureMap, ConstantImageIsZero) {
  for (auto kind : {CurvatureKind::mean, CurvatureKind::gaussian}) {
    const auto m = curvature_map(Image(17, 9, 1, 140.0), spec_for(kind));
    for (double v : m.values) EXPECT_EQ(v, 0.0);
  }
}

TEST(CurvatureMap, PlanarRampZeroInsideAndAlongFlatBorders) {
  Image ramp(20, 16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 20; ++j) ramp(i, j) = 5.0 * static_cast<double>(i);
  for (auto kind : {CurvatureKind::mean, CurvatureKind::gaussian}) {
    const auto m = curvature_map(ramp, spec_for(kind));
    for (std::size_t i = 1; i + 1 < 16; ++i)
      for (std::size_t j = 0; j < 20; ++j) EXPECT_EQ(m(i, j), 0.0) << i << "," << j;
  }
  // Padding across the ramp direction folds the surface on the first/last
  // rows: opposite normal curvatures, so H stays 0 while K does not.
  const auto hmap = curvature_map(ramp, spec_for(CurvatureKind::mean));
  const auto kmap = curvature_map(ramp, spec_for(CurvatureKind::gaussian));
  const oracle::Sampler top = [&ramp](int a, int b) {
    const int i = std::clamp(a, 0, 15), j = std::clamp(5 + b, 0, 19);
    return ramp(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  const oracle::HK expect = oracle::hk(oracle::kappas(top, 1.0));
  EXPECT_NEAR(hmap(0, 5), expect.H, 1e-15);
  EXPECT_NEAR(kmap(0, 5), expect.K, 1e-15);
  EXPECT_EQ(hmap(0, 5), 0.0);
  EXPECT_LT(kmap(0, 5), 0.0);
}

TEST(CurvatureMap, MatchesPerPixelOracle) {
  const Image u = random_image(64, 64, 77);
  for (auto kind : {CurvatureKind::mean, CurvatureKind::gaussian}) {
    const auto m = curvature_map(u, spec_for(kind));
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) {
        const oracle::Sampler s = [&](int a, int b) {
          return u(static_cast<std::size_t>(std::clamp(i + a, 0, 63)), static_cast<std::size_t>(std::clamp(j + b, 0, 63)));
        };
        const auto hk = oracle::hk(oracle::kappas(s, 1.0));
        ASSERT_NEAR(m(i, j), kind == CurvatureKind::mean ? hk.H : hk.K, 1e-12);
      }
  }
}

TEST(CurvatureMap, TranslationInvariance) {
  const Image u = random_image(24, 20, 9);
  Image shifted = u;
  for (double& v : shifted.values()) v += 64.0;
  for (auto kind : {CurvatureKind::mean, CurvatureKind::gaussian}) {
    const auto a = curvature_map(u, spec_for(kind));
    const auto b = curvature_map(shifted, spec_for(kind));
    for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-12);
  }
}

// The eight plane formulas are symmetric under a 180-degree rotation of the
// window and under u -> -u: both send every kappa to -kappa of a relabelled
// plane, so H flips sign and K is preserved.
TEST(CurvatureMap, RotationAndNegationSymmetry) {
  const std::size_t w = 23, h = 19;
  const Image u = random_image(w, h, 31);
  Image rot(w, h), neg(w, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      rot(h - 1 - i, w - 1 - j) = u(i, j);
      neg(i, j) = -u(i, j);
    }
  const auto H = curvature_map(u, spec_for(CurvatureKind::mean));
  const auto K = curvature_map(u, spec_for(CurvatureKind::gaussian));
  const auto Hr = curvature_map(rot, spec_for(CurvatureKind::mean));
  const auto Kr = curvature_map(rot, spec_for(CurvatureKind::gaussian));
  const auto Hn = curvature_map(neg, spec_for(CurvatureKind::mean));
  const auto Kn = curvature_map(neg, spec_for(CurvatureKind::gaussian));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      EXPECT_NEAR(Hr(h - 1 - i, w - 1 - j), -H(i, j), 1e-12);
      EXPECT_NEAR(Kr(h - 1 - i, w - 1 - j), K(i, j), 1e-12);
      EXPECT_NEAR(Hn(i, j), -H(i, j), 1e-12);
      EXPECT_NEAR(Kn(i, j), K(i, j), 1e-12);
    }
}

TEST(CurvatureMap, RejectsBadInput) {
  Image u(5, 5);
  u(2, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(curvature_map(u, {}), std::invalid_argument);
  EXPECT_THROW(curvature_map(Image(5, 5, 3), {}), std::invalid_argument);
}

TEST(WeightMap, Formulas) {
  CurvatureMap k(3, 1);
  k.values = {0.0, -1.0, 2.0};
  CurvatureSpec s;
  s.alpha = 0.5;
  s.weight = WeightKind::tac;
  EXPECT_EQ(weight_map(k, s).values, (std::vector<double>{1.0, 1.5, 2.0}));
  s.alpha = 5.0;
  s.weight = WeightKind::trv;
  EXPECT_DOUBLE_EQ(weight_map(k, s).values[2], std::sqrt(21.0));
  EXPECT_EQ(weight_map(k, s).values[0], 1.0);
  s.weight = WeightKind::tsc;
  EXPECT_DOUBLE_EQ(weight_map(k, s).values[2], 21.0);
  EXPECT_EQ(weight_map(k, s).values[0], 1.0);
  s.weight = WeightKind::tv;
  EXPECT_EQ(weight_map(k, s).values, (std::vector<double>{1.0, 1.0, 1.0}));
  s.alpha = -0.1;
  s.weight = WeightKind::tac;
  EXPECT_THROW(weight_map(k, s), std::invalid_argument);
}

TEST(WeightMap, AtLeastOneEverywhere) {
  const Image u = random_image(40, 40, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ad(0.0, 50.0);
  for (auto wk : {WeightKind::tac, WeightKind::tsc, WeightKind::trv, WeightKind::tv})
    for (auto ck : {CurvatureKind::mean, CurvatureKind::gaussian}) {
      CurvatureSpec s{ck, wk, ad(rng), 1.0};
      for (double g : curvature_weights(u, s).values) EXPECT_GE(g, 1.0);
    }
}
