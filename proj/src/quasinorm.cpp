#include "qrad/quasinorm.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "qrad/errors.hpp"

namespace qrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

CompatiblePair::CompatiblePair(ConvexDomain domain, DilationGroup group, double theta, int theta_samples)
    : domain_(std::move(domain)), group_(group), theta_(theta), theta_samples_(theta_samples) {}

double CompatiblePair::rho_generic(Vec2 xi) const {
  const double r = norm(xi);
  if (r == 0.0) return 0.0;
  auto f = [&](double s) { return std::log(domain_.gauge(group_.exp(-s) * xi)); };
  const double limit = 60.0 * std::numbers::ln2;
  double lo = std::log(r / std::ldexp(1.0, M())) - 1.0;
  double hi = lo + 2.0;
  double flo = f(lo), fhi = f(hi);
  double width = 2.0;
  while (!(flo > 0.0)) {
    lo -= width;
    width *= 2.0;
    if (lo < -limit) fail(ErrorKind::Numeric, "rho root not bracketed below");
    flo = f(lo);
  }
  width = 2.0;
  while (!(fhi < 0.0)) {
    hi += width;
    width *= 2.0;
    if (hi > limit) fail(ErrorKind::Numeric, "rho root not bracketed above");
    fhi = f(hi);
  }
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-14; };
  const auto root = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return std::exp(0.5 * (root.first + root.second));
}

double CompatiblePair::rho(Vec2 xi) const {
  if (group_.is_scalar()) {
    const double g = domain_.gauge(xi);
    if (g == 0.0) return 0.0;
    return std::pow(g, 1.0 / group_.A().a);
  }
  return rho_generic(xi);
}

Vec2 CompatiblePair::project(Vec2 xi) const {
  double r;
  Vec2 p;
  rho_and_project(xi, r, p);
  return p;
}

void CompatiblePair::rho_and_project(Vec2 xi, double& r, Vec2& proj) const {
  r = rho(xi);
  if (r == 0.0) {
    proj = Vec2{};
    return;
  }
  proj = group_.exp(-std::log(r)) * xi;
}

CompatiblePair check_compatibility(const ConvexDomain& domain, const DilationGroup& group, int samples) {
  if (samples < 8) fail(ErrorKind::Validation, "compatibility check needs at least 8 samples");
  std::vector<Vec2> points;
  points.reserve(samples + domain.vertices().size());
  for (int k = 0; k < samples; ++k) points.push_back(domain.boundary_point(kTwoPi * k / samples));
  for (const Vec2& v : domain.vertices()) points.push_back(v);

  constexpr int kGrid = 60;
  std::vector<Mat2> flows(kGrid + 1);
  for (int q = 0; q <= kGrid; ++q) flows[q] = group.exp(-(-3.0 + 6.0 * q / kGrid));

  double theta = std::numbers::pi / 2;
  for (const Vec2& xi : points) {
    double prev = domain.gauge(flows[0] * xi);
    int crossings = 0;
    for (int q = 1; q <= kGrid; ++q) {
      const double g = domain.gauge(flows[q] * xi);
      if (!(g < prev)) {
        std::ostringstream os;
        os << "orbit through (" << xi.x << ", " << xi.y << ") is not monotone across the boundary";
        fail(ErrorKind::Incompatibility, os.str());
      }
      if ((prev - 1.0) * (g - 1.0) < 0.0) ++crossings;
      prev = g;
    }
    if (crossings > 1) fail(ErrorKind::Incompatibility, "orbit crosses the boundary more than once");
    const Vec2 tangent = group.orbit_tangent(xi);
    const double tn = norm(tangent);
    for (const Vec2& dir : domain.tangents_at(xi)) {
      const double c = std::fmin(1.0, std::fabs(dot(tangent, dir)) / tn);
      theta = std::fmin(theta, std::acos(c));
    }
  }
  if (theta < 1e-6) fail(ErrorKind::Incompatibility, "orbits are tangent to the boundary (theta < 1e-6)");
  return CompatiblePair(domain, group, theta, static_cast<int>(points.size()));
}

double eval_rho(const CompatiblePair& pair, Vec2 xi) { return pair.rho(xi); }

double rho_lipschitz_probe(const CompatiblePair& pair, Annulus annulus, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> radius(annulus.inner, annulus.outer);
  const double eps = 1e-3 * annulus.inner;
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vec2 a = unit(angle(rng)) * radius(rng);
    const Vec2 b = a + unit(angle(rng)) * eps;
    best = std::fmax(best, std::fabs(pair.rho(a) - pair.rho(b)) / norm(a - b));
  }
  return best;
}

}  // namespace qrad
