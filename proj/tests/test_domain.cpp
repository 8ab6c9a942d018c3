#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "qrad/domain.hpp"
#include "qrad/errors.hpp"

using namespace qrad;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kBuiltins[] = {"disk", "superellipse", "hexagon", "square"};

double max_vertex_radius(const std::vector<Vec2>& v) {
  double r = 0.0;
  for (const Vec2& p : v) r = std::fmax(r, norm(p));
  return r;
}

}  // namespace

TEST(Domain, ComputeM) {
  EXPECT_EQ(compute_M(ConvexDomain::disk(10.0)), 4);
  EXPECT_EQ(compute_M(ConvexDomain::disk(9.0)), 4);
  const std::vector<Vec2> sq{{-12, -12}, {12, -12}, {12, 12}, {-12, 12}};
  const int M = compute_M(ConvexDomain::polygon(sq));
  EXPECT_EQ(M, static_cast<int>(std::ceil(std::log2(max_vertex_radius(sq)))));
  EXPECT_EQ(M, 5);
}

TEST(Domain, SmallDomainRejected) {
  try {
    ConvexDomain::disk(5.0);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
}

TEST(Domain, DiskArcMatchesCircle) {
  const BoundaryArc arc = boundary_arc(ConvexDomain::disk(10.0), 0.0);
  const double c = std::ldexp(1.0, arc.M()) + 1.0;
  for (int k = 0; k <= 200; ++k) {
    const double t = -1.0 + k / 100.0;
    const double u = std::sqrt(100.0 - t * t);
    EXPECT_NEAR(arc.gamma(t), c - u, 1e-12);
    EXPECT_NEAR(arc.dL(t), t / u, 1e-9);
    EXPECT_NEAR(arc.dR(t), t / u, 1e-9);
  }
  EXPECT_NEAR(arc.dL(0.0), 0.0, 1e-12);
}

TEST(Domain, SquareArcIsFlat) {
  const BoundaryArc arc = boundary_arc(builtin_domain("square"), 0.0);
  const double g0 = arc.gamma(0.0);
  for (double t : {-0.9, -0.3, 0.2, 0.8}) {
    EXPECT_NEAR(arc.gamma(t), g0, 1e-12);
    EXPECT_EQ(arc.dL(t), 0.0);
    EXPECT_EQ(arc.dR(t), 0.0);
  }
}

TEST(Domain, HexagonVertexJump) {
  // Vertex at (0, 10); adjacent vertices at (-+10 cos 30deg, 5).
  const BoundaryArc arc = boundary_arc(builtin_domain("hexagon"), 0.0);
  const double s = 5.0 / (10.0 * std::cos(kPi / 6));
  EXPECT_NEAR(arc.dL(0.0), -s, 1e-12);
  EXPECT_NEAR(arc.dR(0.0), s, 1e-12);
  EXPECT_NEAR(arc.dR(0.0) - arc.dL(0.0), 2.0 * std::tan(kPi / 6), 1e-12);
  EXPECT_NEAR(arc.dL(0.5), s, 1e-12);
  EXPECT_NEAR(arc.dR(-0.5), -s, 1e-12);
}

TEST(Domain, ArcInvariants) {
  for (const char* name : kBuiltins) {
    const ConvexDomain dom = builtin_domain(name);
    const int M = dom.M();
    const double cap = std::ldexp(1.0, M - 1);
    for (int r = 0; r < 10; ++r) {
      const BoundaryArc arc = boundary_arc(dom, 2.0 * kPi * r / 10);
      double prev_dR = -1e300;
      for (int k = 0; k < 100; ++k) {
        const double t = -1.0 + 2.0 * k / 99.0;
        const double g = arc.gamma(t), dl = arc.dL(t), dr = arc.dR(t);
        EXPECT_GT(g, 1.0) << name;
        EXPECT_LT(g, std::ldexp(1.0, M)) << name;
        EXPECT_LE(std::fabs(dl), cap) << name;
        EXPECT_LE(std::fabs(dr), cap) << name;
        EXPECT_LE(dl, dr + 1e-12) << name;
        EXPECT_GE(dl, prev_dR - 1e-12) << name;
        prev_dR = dr;
        const Vec2 p = arc.point(t);
        for (const Vec2& n : dom.normals_at(p))
          EXPECT_GE(std::fabs(dot(p, n)), std::ldexp(1.0, -M) * norm(p)) << name;
      }
    }
  }
}

TEST(Domain, GaugeMatchesClosedForms) {
  const ConvexDomain disk = builtin_domain("disk"), se = builtin_domain("superellipse"),
                     sq = builtin_domain("square");
  for (int k = 0; k < 64; ++k) {
    const Vec2 x = unit(0.1 + k * 0.37) * (0.5 + 0.1 * k);
    EXPECT_NEAR(disk.gauge(x), norm(x) / 10.0, 1e-13);
    const double q = std::pow(std::pow(std::fabs(x.x) / 10, 4) + std::pow(std::fabs(x.y) / 10, 4), 0.25);
    EXPECT_NEAR(se.gauge(x), q, 1e-12);
    EXPECT_NEAR(sq.gauge(x), std::fmax(std::fabs(x.x), std::fabs(x.y)) / 10.0, 1e-13);
  }
}

TEST(Domain, SmoothApproximationConverges) {
  const ConvexDomain disk = builtin_domain("disk");
  double prev = 1e300;
  for (int n : {16, 32, 64, 128}) {
    const ConvexDomain sm = smooth_approximate(disk, n);
    EXPECT_GE(sm.min_support_curvature(), -1e-9) << n;
    double hd = 0.0;
    for (int k = 0; k < 4096; ++k) hd = std::fmax(hd, std::fabs(sm.radius(2.0 * kPi * k / 4096) - 10.0));
    EXPECT_LE(hd, 1.05 * prev) << n;
    // Inscribed chord sagitta bounds the distance from above.
    EXPECT_LE(hd, 10.0 * (1.0 - std::cos(kPi / n)) + 1e-9) << n;
    prev = hd;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(Domain, SmoothApproximationOfSquare) {
  const ConvexDomain sq = builtin_domain("square");
  for (int n : {16, 32}) {
    const ConvexDomain sm = smooth_approximate(sq, n);
    EXPECT_GE(sm.min_support_curvature(), -1e-9);
    EXPECT_GE(sm.inradius(), 4.0);
    EXPECT_LT(sm.max_radius(), std::ldexp(1.0, sq.M() + 1));
    // The corner at 45 degrees is a vertex of P_n and is rounded inward.
    EXPECT_LT(sm.radius(kPi / 4), 10.0 * std::sqrt(2.0));
    EXPECT_GT(sm.radius(kPi / 4), 10.0 * std::sqrt(2.0) - 0.5);
  }
}

TEST(Domain, SmoothApproximationRhoConverges) {
  for (const char* name : {"superellipse", "hexagon"}) {
    const ConvexDomain dom = builtin_domain(name);
    double prev = 1e300;
    for (int n : {16, 32, 64, 128}) {
      const ConvexDomain sm = smooth_approximate(dom, n);
      double err = 0.0;
      for (int k = 0; k < 2048; ++k) {
        const Vec2 x = unit(2.0 * kPi * k / 2048);
        err = std::fmax(err, std::fabs(sm.gauge(x) - dom.gauge(x)));
      }
      EXPECT_LE(err, 1.05 * prev) << name << " n=" << n;
      prev = err;
    }
  }
}

TEST(Domain, SmoothApproximationTooCoarse) {
  EXPECT_THROW(smooth_approximate(builtin_domain("disk"), 4), Error);
}
