#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qrad/bumps.hpp"
#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

using namespace qrad;

namespace {

constexpr double kPi = std::numbers::pi;

CompatiblePair pair_of(const char* name, Mat2 A = Mat2::identity()) {
  return check_compatibility(builtin_domain(name), DilationGroup(A));
}

// Random point with rho in [lo, hi].
Vec2 random_point(const CompatiblePair& pair, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), lr(std::log(lo), std::log(hi));
  const Vec2 b = pair.domain().boundary_point(ang(rng));
  return pair.group().power(std::exp(lr(rng))) * b;
}

}  // namespace

TEST(Bumps, SmoothStepIdentities) {
  for (int k = -10; k <= 110; ++k) {
    const double y = k / 100.0;
    EXPECT_NEAR(smooth_step(y) + smooth_step(1.0 - y), 1.0, 1e-15);
  }
  EXPECT_EQ(plateau_bump(0.5), 1.0);
  EXPECT_EQ(plateau_bump(1.0), 0.0);
  EXPECT_EQ(mother_bump(0.0), 1.0);
  EXPECT_EQ(mother_bump(1.0), 0.0);
}

TEST(Bumps, DyadicTelescoping) {
  for (int k = 0; k <= 400; ++k) {
    const double s = std::exp(std::log(0.01) + k * std::log(1e4) / 400);
    double sum = 0.0;
    for (int n = -12; n <= 12; ++n) sum += phi0(std::ldexp(s, -n));
    EXPECT_NEAR(sum, 1.0, 1e-14) << s;
    EXPECT_NEAR(phi_n(2, s), phi0(s / 4.0), 1e-15);
  }
  EXPECT_EQ(phi0(0.5), 0.0);
  EXPECT_EQ(phi0(2.0), 0.0);
}

TEST(Bumps, RadialPartitionSumsToOne) {
  const Tiling T = build_tiling(pair_of("disk"), 1.0 / 32, -1, 1);
  const PartitionOfUnity P(T);
  for (int k = 0; k <= 2000; ++k) {
    const double s = 0.5 * std::pow(4.0, k / 2000.0);
    double sum = 0.0;
    for (int m = P.m_min(); m <= P.m_max(); ++m) sum += P.psi(m, s);
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
}

TEST(Bumps, AlphaPlateaus) {
  const Tiling T = build_tiling(pair_of("hexagon"), 1.0 / 32, 0, 0);
  const PartitionOfUnity P(T);
  const CapDecomposition& C = T.caps(0);
  for (int j = 1; j < C.Qprime; ++j) {
    const double lo = C.refined[j].lo, len = C.refined[j].length();
    EXPECT_EQ(P.alpha(0, j, lo), 1.0);
    EXPECT_EQ(P.alpha(0, j, lo + 0.5 * len), 1.0);
    const double w = 0.01 * std::fmin(len, C.refined[j - 1].length());
    EXPECT_EQ(P.alpha(0, j, lo - 1.0001 * w), 0.0);
  }
}

TEST(Bumps, SigmaPlateauAndSupport) {
  const Tiling T = build_tiling(pair_of("disk"), 1.0 / 16, -1, 1);
  const PartitionOfUnity P(T);
  const int j = T.caps(0).locate(0.0);
  const Interval I = T.caps(0).refined[j];
  const double x = 0.5 * (I.lo + I.hi);
  const Vec2 xi = T.boundary_point(0, x);
  EXPECT_NEAR(P.sigma({0, j, 0, 0}, xi), 1.0, 1e-12);
  EXPECT_EQ(P.sigma({0, j, 0, 0}, xi * 3.0), 0.0);
  EXPECT_NEAR(P.sigma({0, j, 0, 1}, xi * 2.0), 1.0, 1e-12);
}

TEST(Bumps, PartitionMatchesBruteForce) {
  const CompatiblePair pair = pair_of("disk", Mat2::diag(1.0, 2.0));
  const Tiling T = build_tiling(pair, 1.0 / 16, -1, 1);
  const PartitionOfUnity P(T);
  std::mt19937_64 rng(41);
  std::vector<std::pair<TileIndex, double>> nz;
  for (int k = 0; k < 12; ++k) {
    const Vec2 xi = random_point(pair, rng, 0.5, 2.0);
    double brute = 0.0;
    std::map<TileIndex, double> brute_nz;
    for (int i = 0; i < T.sectors().size(); ++i)
      for (int j = 0; j < T.caps(i).Qprime; ++j)
        for (int m = P.m_min(); m <= P.m_max(); ++m)
          for (int n = -1; n <= 1; ++n) {
            const double v = P.sigma({i, j, m, n}, xi);
            brute += v;
            if (v != 0.0) brute_nz[{i, j, m, n}] = v;
          }
    EXPECT_NEAR(brute, 1.0, 1e-6);
    double rho;
    Vec2 proj;
    pair.rho_and_project(xi, rho, proj);
    P.nonzero(rho, proj, -1, 1, nz);
    ASSERT_EQ(nz.size(), brute_nz.size());
    for (const auto& [t, v] : nz) EXPECT_NEAR(v, brute_nz.at(t), 1e-12);
  }
}

TEST(Bumps, PartitionOnRandomPoints) {
  for (const char* name : {"disk", "superellipse", "hexagon"}) {
    const CompatiblePair pair = pair_of(name);
    const Tiling T = build_tiling(pair, 1.0 / 32, -1, 1);
    const PartitionOfUnity P(T);
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Vec2 xi = random_point(pair, rng, 0.5, 2.0);
      double rho;
      Vec2 proj;
      pair.rho_and_project(xi, rho, proj);
      worst = std::fmax(worst, std::fabs(P.sum(rho, proj, -1, 1) - 1.0));
    }
    EXPECT_LE(worst, 1e-6) << name;
  }
}

TEST(Bumps, SupportNearOwnTile) {
  // Nonzero sigma_{i,j,m,n} at xi implies xi lies in a tile of sector i within
  // a bounded index distance; the radius is measured at delta = 1/16 and must not grow.
  auto radius = [](double d) {
    const CompatiblePair pair = pair_of("disk");
    const Tiling T = build_tiling(pair, d, 0, 0);
    const PartitionOfUnity P(T);
    std::mt19937_64 rng(43);
    std::vector<std::pair<TileIndex, double>> nz;
    std::vector<TileIndex> in;
    int worst = 0;
    for (int k = 0; k < 3000; ++k) {
      const Vec2 xi = random_point(pair, rng, 0.55, 1.8);
      double rho;
      Vec2 proj;
      pair.rho_and_project(xi, rho, proj);
      P.nonzero(rho, proj, 0, 0, nz);
      T.tiles_at(rho, proj, in);
      for (const auto& [t, v] : nz) {
        int best = 1 << 20;
        for (const TileIndex& u : in)
          if (u.i == t.i) best = std::min(best, std::max(std::abs(u.j - t.j), std::abs(u.m - t.m)));
        worst = std::max(worst, best);
      }
    }
    return worst;
  };
  const int C = radius(1.0 / 16);
  EXPECT_LE(C, 2);
  EXPECT_LE(radius(1.0 / 64), C);
}

TEST(Bumps, DerivativeScales) {
  // delta |d sigma / d rho| stays bounded by one constant across delta.
  auto scale = [](double d) {
    const CompatiblePair pair = pair_of("disk");
    const Tiling T = build_tiling(pair, d, 0, 0);
    const PartitionOfUnity P(T);
    std::mt19937_64 rng(44);
    std::vector<std::pair<TileIndex, double>> nz;
    double worst = 0.0;
    const double h = 1e-3 * d;
    for (int k = 0; k < 1000; ++k) {
      const Vec2 xi = random_point(pair, rng, 0.6, 1.6);
      double rho;
      Vec2 proj;
      pair.rho_and_project(xi, rho, proj);
      P.nonzero(rho, proj, 0, 0, nz);
      for (const auto& [t, v] : nz) {
        const double g = (P.sigma(t, rho + h, proj) - P.sigma(t, rho - h, proj)) / (2.0 * h);
        worst = std::fmax(worst, d * std::fabs(g));
      }
    }
    return worst;
  };
  const double a = scale(1.0 / 16), b = scale(1.0 / 64);
  EXPECT_GT(a, 0.0);
  EXPECT_LE(std::fmax(a, b) / std::fmin(a, b), 2.0);
}

TEST(Bumps, AnnulusCutoff) {
  EXPECT_EQ(annulus_cutoff(0.1, 2.0, 2.0), 1.0);
  EXPECT_EQ(annulus_cutoff(0.1, 1.1, 1.0), 0.0);
  EXPECT_GT(annulus_cutoff(0.1, 1.09, 1.0), 0.0);
  // Scaling in t matches rho homogeneity.
  const CompatiblePair pair = pair_of("disk", Mat2::diag(1.0, 2.0));
  const Vec2 xi{3.0, 7.0};
  const double t = 1.7;
  EXPECT_NEAR(annulus_cutoff(0.2, pair.rho(pair.group().power(t) * xi), t),
              annulus_cutoff(0.2, pair.rho(xi), 1.0), 1e-12);
}

class KernelTest : public ::testing::Test {
 protected:
  KernelTest()
      : pair(pair_of("disk")), geom(frequency_geometry(pair, GridSpec{512, 32.0, {}})), sym(geom.rho.size()) {
    // Gaussian ring of width 0.5 in |xi|: the kernel envelope decays like a Gaussian.
    for (std::size_t q = 0; q < sym.size(); ++q) sym[q] = std::exp(-0.5 * std::pow((geom.rho[q] - 1.0) / 0.05, 2));
  }
  CompatiblePair pair;
  FrequencyGeometry geom;
  std::vector<double> sym;
};

TEST_F(KernelTest, Plancherel) {
  const Kernel K = kernel_from_symbol(geom, sym);
  const GridSpec& s = geom.spec;
  double k2 = 0.0, s2 = 0.0;
  for (const cplx& z : K.values.values()) k2 += std::norm(z);
  for (double v : sym) s2 += v * v;
  k2 *= s.dx() * s.dx();
  s2 *= s.dxi() * s.dxi() / (4.0 * kPi * kPi);
  EXPECT_NEAR(k2 / s2, 1.0, 1e-6);
}

TEST_F(KernelTest, RealAndRadial) {
  const Kernel K = kernel_from_symbol(geom, sym);
  const int N = geom.spec.N;
  double mx = 0.0;
  for (const cplx& z : K.values.values()) mx = std::fmax(mx, std::abs(z));
  for (int a = 1; a < N; ++a)
    for (int b = 1; b < N; ++b) {
      const cplx z = K.values.at(a, b);
      EXPECT_LE(std::fabs(z.imag()), 1e-8 * mx);
      // (x, y) -> (-y, x) about the origin at index N/2.
      const int a2 = b, b2 = N - a;
      EXPECT_LE(std::abs(z - K.values.at(a2, b2)), 1e-8 * mx);
    }
}

TEST_F(KernelTest, ModulationShifts) {
  const GridSpec& s = geom.spec;
  const int sa = -5, sb = 3;
  const Vec2 x0{sb * s.dx(), sa * s.dx()};
  GridField F(s, Space::Frequency), G(s, Space::Frequency);
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) {
      const std::size_t q = static_cast<std::size_t>(a) * s.N + b;
      F.values()[q] = sym[q];
      G.values()[q] = sym[q] * std::polar(1.0, -dot(x0, s.xi_at(a, b)));
    }
  F.inverse();
  G.inverse();
  double mx = 0.0;
  for (const cplx& z : F.values()) mx = std::fmax(mx, std::abs(z));
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) {
      const int a0 = ((a - sa) % s.N + s.N) % s.N, b0 = ((b - sb) % s.N + s.N) % s.N;
      EXPECT_LE(std::abs(G.at(a, b) - F.at(a0, b0)), 1e-12 * mx);
    }
}

TEST_F(KernelTest, AnnuliPartitionTheL1Norm) {
  const Kernel K = kernel_from_symbol(geom, sym);
  const GridSpec& s = geom.spec;
  double sum = 0.0;
  for (int k = -12; (2 << k) <= s.L || k < 0; ++k) sum += kernel_annulus_l1(K.values, k);
  double rest = 0.0;
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) {
      const double r = norm(s.x_at(a, b));
      if (r < std::ldexp(1.0, -12) || r >= s.L) rest += std::abs(K.values.at(a, b)) * s.dx() * s.dx();
    }
  EXPECT_NEAR((sum + rest) / K.l1, 1.0, 1e-3);
  // Below the cell size the annuli are empty.
  EXPECT_EQ(kernel_annulus_l1(K.values, -12), 0.0);
  EXPECT_THROW(kernel_annulus_l1(K.values, 5), Error);
}

TEST_F(KernelTest, SharpCutoffFailsTailCheck) {
  std::vector<double> sharp(sym.size());
  for (std::size_t q = 0; q < sharp.size(); ++q) sharp[q] = geom.rho[q] <= 1.0 ? 1.0 : 0.0;
  try {
    kernel_from_symbol(geom, sharp);
    FAIL() << "expected a resolution error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Resolution);
  }
}
