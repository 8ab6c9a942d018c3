#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qrad/errors.hpp"
#include "qrad/family.hpp"
#include "qrad/grid.hpp"
#include "qrad/smoothstep.hpp"

using namespace qrad;

namespace {

constexpr double kPi = std::numbers::pi;

CompatiblePair disk_pair(Mat2 A = Mat2::identity()) {
  return check_compatibility(builtin_domain("disk"), DilationGroup(A));
}

GridField gaussian(const GridSpec& s, double w, Vec2 c = {}) {
  GridField f(s);
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) {
      const Vec2 x = s.x_at(a, b) - c;
      f.at(a, b) = std::exp(-dot(x, x) / (2.0 * w * w));
    }
  return f;
}

double max_abs(const GridField& f) {
  double m = 0.0;
  for (const cplx& z : f.values()) m = std::fmax(m, std::abs(z));
  return m;
}

double max_diff(const GridField& f, const GridField& g) {
  double m = 0.0;
  for (std::size_t q = 0; q < f.values().size(); ++q) m = std::fmax(m, std::abs(f.values()[q] - g.values()[q]));
  return m;
}

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Grid, RoundTrip) {
  const GridSpec s{128, 16.0, {}};
  GridField f(s);
  std::mt19937_64 rng(51);
  std::normal_distribution<double> n;
  for (cplx& z : f.values()) z = {n(rng), n(rng)};
  const GridField g = to_physical(to_frequency(f));
  EXPECT_LE(max_diff(f, g), 1e-10 * max_abs(f));
}

TEST(Grid, GaussianTransform) {
  const GridSpec s{256, 32.0, {}};
  const double w = 2.0;
  const GridField F = to_frequency(gaussian(s, w));
  for (int a = 0; a < s.N; a += 7)
    for (int b = 0; b < s.N; b += 5) {
      const Vec2 xi = s.xi_at(a, b);
      const double exact = 2.0 * kPi * w * w * std::exp(-0.5 * w * w * dot(xi, xi));
      EXPECT_NEAR(F.at(a, b).real(), exact, 1e-10);
      EXPECT_NEAR(F.at(a, b).imag(), 0.0, 1e-10);
    }
}

TEST(Grid, FrequencyLattice) {
  const GridSpec s{64, 8.0, {}};
  EXPECT_DOUBLE_EQ(s.dxi(), kPi / 8.0);
  EXPECT_DOUBLE_EQ(s.xi_at(0, 0).x, 0.0);
  EXPECT_DOUBLE_EQ(s.xi_at(0, 32).x, -32 * kPi / 8.0);
  EXPECT_DOUBLE_EQ(s.xi_at(0, 31).x, 31 * kPi / 8.0);
}

TEST(Grid, IdentityAndProjection) {
  const GridSpec s{128, 16.0, {}};
  const GridField f = gaussian(s, 1.3, {2.0, -1.0});
  const GridField g = apply_multiplier(f, [](Vec2) { return 1.0; });
  EXPECT_LE(max_diff(f, g), 1e-12 * max_abs(f));
  auto half = [](Vec2 xi) { return xi.x + 0.3 * xi.y > 0.0 ? 1.0 : 0.0; };
  const GridField p1 = apply_multiplier(f, half);
  const GridField p2 = apply_multiplier(p1, half);
  EXPECT_LE(max_diff(p1, p2), 1e-12 * max_abs(f));
}

TEST(Grid, LinearityAndPlancherel) {
  const GridSpec s{128, 16.0, {}};
  const GridField f = gaussian(s, 1.0, {1.0, 0.0}), g = gaussian(s, 2.0, {-3.0, 2.0});
  auto sym = [](Vec2 xi) { return std::exp(-norm(xi)); };
  GridField h(s);
  for (std::size_t q = 0; q < s.size(); ++q) h.values()[q] = 2.0 * f.values()[q] - 0.5 * g.values()[q];
  const GridField Th = apply_multiplier(h, sym), Tf = apply_multiplier(f, sym), Tg = apply_multiplier(g, sym);
  double m = 0.0;
  for (std::size_t q = 0; q < s.size(); ++q)
    m = std::fmax(m, std::abs(Th.values()[q] - 2.0 * Tf.values()[q] + 0.5 * Tg.values()[q]));
  EXPECT_LE(m, 1e-10);
  const GridField F = to_frequency(f);
  double l2x = 0.0, l2xi = 0.0;
  for (const cplx& z : f.values()) l2x += std::norm(z);
  for (const cplx& z : F.values()) l2xi += std::norm(z);
  EXPECT_NEAR(l2x * s.dx() * s.dx(), l2xi * s.dxi() * s.dxi() / (4.0 * kPi * kPi), 1e-10 * l2x * s.dx() * s.dx());
}

TEST(Grid, QuasiradialMatchesRadialMask) {
  const CompatiblePair pair = disk_pair();
  const GridSpec s{256, 32.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair, s);
  const GridField f = gaussian(s, 0.3, {1.0, 2.0});
  auto band = [](double r) { return r >= 0.5 && r <= 2.0 ? 1.0 : 0.0; };
  const GridField a = apply_quasiradial_multiplier(geom, f, band);
  const GridField b = apply_multiplier(f, [&](Vec2 xi) { return band(std::hypot(xi.x, xi.y) / 10.0); });
  EXPECT_LE(max_diff(a, b), 1e-10 * max_abs(f));
  const GridField c = apply_quasiradial_multiplier(geom, f, [](double) { return 1.0; });
  EXPECT_LE(max_diff(c, f), 1e-12 * max_abs(f));
}

TEST(Grid, BochnerRieszLimits) {
  const CompatiblePair pair = disk_pair();
  const GridSpec s{256, 16.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair, s, false);
  const GridField f = gaussian(s, 1.0);
  const GridField sharp = bochner_riesz_mean(geom, f, 0.7, 0.0);
  const GridField oracle = apply_multiplier(f, [](Vec2 xi) { return norm(xi) / 10.0 < 0.7 ? 1.0 : 0.0; });
  EXPECT_LE(max_diff(sharp, oracle), 1e-12);
  // The Gaussian spectrum is below 1e-100 beyond |xi| = 22, well inside rho < 100.
  const GridField wide = bochner_riesz_mean(geom, f, 1e12, 1.0);
  EXPECT_LE(max_diff(wide, f), 1e-10);
  EXPECT_EQ(bochner_riesz_symbol(1.0, 1.0, -0.3), 0.0);
  EXPECT_EQ(bochner_riesz_symbol(1.5, 1.0, 0.5), 0.0);
}

TEST(Grid, BochnerRieszHankelOracle) {
  // R f(x) = (2 pi)^{-1} int_0^{10 t} (1 - r/(10 t)) fhat(r) J0(r |x|) r dr for the
  // Gaussian fhat(r) = 2 pi w^2 exp(-w^2 r^2 / 2); the cutoff sits where fhat ~ 1e-8.
  // The cone of |xi| at the origin gives an |x|^-3 tail, so the torus error
  // scales like L^-3; L = 64 keeps it below 1e-6.
  const CompatiblePair pair = disk_pair();
  const GridSpec s{1024, 64.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair, s, false);
  const double w = 0.76, t = 0.8, R = 10.0 * t;
  const GridField out = bochner_riesz_mean(geom, gaussian(s, w), t, 1.0);
  for (const auto& [a, b] : {std::pair{512, 512}, std::pair{512, 520}, std::pair{524, 516}, std::pair{484, 534}}) {
    const double r = norm(s.x_at(a, b));
    const double exact = simpson(
        [&](double q) {
          return (1.0 - q / R) * w * w * std::exp(-0.5 * w * w * q * q) * std::cyl_bessel_j(0.0, q * r) * q;
        },
        0.0, R, 20000);
    EXPECT_NEAR(out.at(a, b).real(), exact, 1e-6) << "r=" << r;
    EXPECT_NEAR(out.at(a, b).imag(), 0.0, 1e-10);
  }
}

TEST(Grid, DyadicDecomposition) {
  const double lambda = 0.5;
  const BochnerRieszDecomposition D(lambda, 4, std::ldexp(1.0, -10));
  EXPECT_EQ(D.K(), 10);
  // Middle region: all pieces present, exact sum.
  EXPECT_NEAR(D.partial_sum(5.0, 0.5), std::pow(0.5, lambda), 1e-14);
  for (int j = 1; j <= 10; ++j) {
    const double u = std::ldexp(1.0, -j);
    EXPECT_NEAR(D.partial_sum(10.0 * (1.0 - u), 1.0 - u), std::pow(u, lambda), 1e-14) << j;
  }
  // Beyond 2^-K the truncation error is at most 2^{-K lambda}.
  const double u = std::ldexp(1.0, -13);
  EXPECT_LE(std::fabs(D.partial_sum(10.0, 1.0 - u) - std::pow(u, lambda)), std::pow(2.0, -10 * lambda));
  for (double rho : {1.0, 1.3}) {
    EXPECT_EQ(D.middle(10.0 * rho, rho), 0.0);
    for (int k = 2; k <= 10; ++k) EXPECT_EQ(D.dyadic(k, rho), 0.0);
    EXPECT_EQ(D.partial_sum(10.0 * rho, rho), 0.0);
  }
  EXPECT_EQ(D.partial_sum(1e-4, 1e-5), 1.0);
  EXPECT_EQ(D.partial_sum(1e-4, 1e-5, 1), 1.0);
}

TEST(Grid, SquareFunctionSingleFrequency) {
  const CompatiblePair pair = disk_pair();
  const GridSpec s{128, 16.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair, s, false);
  // A lattice frequency near the unit level set.
  const int k0 = 52;
  const Vec2 xi0{k0 * s.dxi(), 0.0};
  const double rho0 = norm(xi0) / 10.0, delta = 1.0 / 16;
  GridField f(s);
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) f.at(a, b) = std::polar(1.0, dot(xi0, s.x_at(a, b)));
  const LogGrid tg{0.7, 1.5, delta / 8};
  const GridField S = square_function_annulus(geom, f, delta, tg);
  const double exact = std::sqrt(simpson(
      [&](double lt) { return std::pow(mother_bump((rho0 / std::exp(lt) - 1.0) / delta), 2); },
      std::log(rho0 / (1.0 + delta)), std::log(rho0 / (1.0 - delta)), 20000));
  for (int a = 0; a < s.N; a += 9)
    for (int b = 0; b < s.N; b += 11) EXPECT_NEAR(S.at(a, b).real(), exact, 1e-4 * exact);
  // Halving the log step shrinks the quadrature error by more than 10x.
  const GridField S2 = square_function_annulus(geom, f, delta, LogGrid{0.7, 1.5, delta / 16});
  EXPECT_LT(std::fabs(S2.at(0, 0).real() - exact), 0.1 * std::fabs(S.at(0, 0).real() - exact));
  // Spectrum away from every annulus of the grid.
  const LogGrid far{2.0, 3.0, delta / 8};
  EXPECT_LE(max_abs(square_function_annulus(geom, f, delta, far)), 1e-12);
  try {
    square_function_annulus(geom, f, delta, LogGrid{0.7, 1.5, delta / 4});
    FAIL() << "expected a configuration error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Configuration);
  }
}

TEST(Grid, GlambdaSingleFrequency) {
  const CompatiblePair pair = disk_pair();
  const GridSpec s{128, 16.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair, s, false);
  const Vec2 xi0{40 * s.dxi(), 24 * s.dxi()};
  const double r = norm(xi0) / 10.0;
  GridField f(s);
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) f.at(a, b) = std::polar(1.0, dot(xi0, s.x_at(a, b)));
  const LogGrid tg{0.5, 4.0, 0.01};
  const GridField G = square_function_glambda(geom, f, 0.0, tg);
  const double exact = std::sqrt(std::log(tg.t_max / r));
  EXPECT_NEAR(G.at(3, 5).real(), exact, 0.01 / exact);
  EXPECT_NEAR(G.at(77, 101).real(), G.at(3, 5).real(), 1e-12);
  const GridField Z = square_function_glambda(geom, GridField(s), 0.5, tg);
  EXPECT_EQ(max_abs(Z), 0.0);
}

TEST(Grid, SpectralFloor) {
  const GridSpec s{64, 8.0, {}};
  GridField F(s, Space::Frequency);
  F.values()[3] = 2.0;
  F.values()[9] = 1e-20;
  EXPECT_DOUBLE_EQ(spectral_floor(F), 2e-12);
}

TEST(Grid, LargerFamilyNeverLowersMax) {
  const CompatiblePair pair = disk_pair();
  const GridSpec s{128, 16.0, {}};
  FamilySpec one{"random", 1, 5}, two{"random", 2, 5};
  const std::vector<double> deltas{1.0 / 8, 1.0 / 16};
  const ScalingReport a = delta_scaling_experiment(pair, deltas, one, s, false);
  const ScalingReport b = delta_scaling_experiment(pair, deltas, two, s, false);
  for (std::size_t k = 0; k < deltas.size(); ++k) EXPECT_GE(b.max_ratio[k], a.max_ratio[k]);
  EXPECT_GT(b.fit.slope, 0.0);
}
