#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qrad/family.hpp"
#include "qrad/lwp.hpp"

using namespace qrad;

namespace {

constexpr double kPi = std::numbers::pi;

struct LwpCase {
  CompatiblePair pair = check_compatibility(builtin_domain("disk"), DilationGroup(Mat2::diag(1.0, 2.0)));
  Tiling tiling = build_tiling(pair, 1.0 / 16, -1, 1);
  PartitionOfUnity pou{tiling};
  ProjectionFamily fam{pou};
};

double l2_squared(const GridField& g) {
  double s = 0.0;
  for (const cplx& z : g.values()) s += std::norm(z);
  return s * g.spec().dx() * g.spec().dx();
}

}  // namespace

TEST(Lwp, EnlargedBumpsReproduceSigma) {
  LwpCase S;
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), lr(std::log(0.5), std::log(2.0));
  std::vector<std::pair<TileIndex, double>> nz;
  int checked = 0;
  for (int k = 0; k < 3000; ++k) {
    const Vec2 xi = S.pair.group().power(std::exp(lr(rng))) * S.pair.domain().boundary_point(ang(rng));
    double rho;
    Vec2 proj;
    S.pair.rho_and_project(xi, rho, proj);
    S.pou.nonzero(rho, proj, -1, 1, nz);
    for (const auto& [t, v] : nz) {
      EXPECT_TRUE(S.fam.active(t));
      EXPECT_EQ(S.fam.phi(t, rho, proj), 1.0);
      ++checked;
    }
  }
  EXPECT_GT(checked, 3000);
}

TEST(Lwp, NonzeroListIsComplete) {
  LwpCase S;
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), lr(std::log(0.5), std::log(2.0));
  std::vector<std::pair<TileIndex, double>> nz;
  for (int k = 0; k < 6; ++k) {
    const Vec2 xi = S.pair.domain().boundary_point(ang(rng)) * std::exp(lr(rng));
    double rho;
    Vec2 proj;
    S.pair.rho_and_project(xi, rho, proj);
    S.fam.nonzero(rho, proj, 0, 0, nz);
    std::size_t brute = 0;
    for (int i = 0; i < S.tiling.sectors().size(); ++i)
      for (int j = 0; j < S.tiling.caps(i).Qprime; ++j)
        for (int m = S.pou.m_min(); m <= S.pou.m_max(); ++m) {
          const TileIndex t{i, j, m, 0};
          if (!S.fam.active(t)) continue;
          const double v = S.fam.phi(t, rho, proj);
          if (v == 0.0) continue;
          ++brute;
          bool listed = false;
          for (const auto& [u, w] : nz) listed = listed || (u == t && w == v);
          EXPECT_TRUE(listed);
        }
    EXPECT_EQ(nz.size(), brute);
  }
}

TEST(Lwp, TileSquareFunctionParseval) {
  LwpCase S;
  const GridSpec s{128, 16.0, {}};
  const FrequencyGeometry geom = frequency_geometry(S.pair, s);
  const TestFunction tf = sector_patch(geom, S.tiling.sectors(), 1.0 / 16, 4);
  int used = 0;
  const GridField Sf = tile_projection_square_function(S.fam, geom, tf.f, 0, 0, &used);
  EXPECT_GT(used, 0);
  // ||S f||_2^2 = (2 pi)^-2 sum over samples of sum_tiles phi^2 |fhat|^2 dxi^2.
  const GridField fhat = to_frequency(tf.f);
  const double floor = spectral_floor(fhat);
  std::vector<std::pair<TileIndex, double>> nz;
  double expect = 0.0;
  for (std::size_t q = 0; q < s.size(); ++q) {
    if (std::abs(fhat.values()[q]) <= floor) continue;
    S.fam.nonzero(geom.rho[q], geom.proj[q], 0, 0, nz);
    double w = 0.0;
    for (const auto& [t, v] : nz) w += v * v;
    expect += w * std::norm(fhat.values()[q]);
  }
  expect *= s.dxi() * s.dxi() / (4.0 * kPi * kPi);
  EXPECT_NEAR(l2_squared(Sf), expect, 1e-10 * expect);
  const GridField Z = tile_projection_square_function(S.fam, geom, GridField(s));
  EXPECT_EQ(l2_squared(Z), 0.0);
}

TEST(Lwp, DyadicCutoff) {
  EXPECT_EQ(dyadic_cutoff(0.5), 1.0);
  EXPECT_EQ(dyadic_cutoff(1.0), 1.0);
  EXPECT_EQ(dyadic_cutoff(2.0), 1.0);
  EXPECT_EQ(dyadic_cutoff(0.25), 0.0);
  EXPECT_EQ(dyadic_cutoff(4.0), 0.0);
  EXPECT_GT(dyadic_cutoff(3.9), 0.0);
  for (double s : {0.3, 0.7, 1.9, 3.1}) EXPECT_NEAR(dyadic_cutoff(s), dyadic_cutoff(1.0 / s), 1e-15);
}

TEST(Lwp, DyadicSquareFunctionParseval) {
  const CompatiblePair pair = check_compatibility(builtin_domain("hexagon"), DilationGroup(Mat2::identity()));
  const GridSpec s{128, 16.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair, s, false);
  const TestFunction g = modulated_gaussian(s, 1.5, {4.0, 7.0});
  const GridField Sf = dyadic_projection_square_function(geom, g.f);
  const GridField fhat = to_frequency(g.f);
  double expect = 0.0;
  for (std::size_t q = 0; q < s.size(); ++q) {
    if (geom.rho[q] == 0.0) continue;
    double w = 0.0;
    for (int n = -80; n <= 80; ++n) w += std::pow(dyadic_cutoff(std::ldexp(geom.rho[q], -n)), 2);
    expect += w * std::norm(fhat.values()[q]);
  }
  expect *= s.dxi() * s.dxi() / (4.0 * kPi * kPi);
  EXPECT_NEAR(l2_squared(Sf), expect, 1e-9 * expect);
}
