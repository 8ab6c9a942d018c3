#include "qrad/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "qrad/errors.hpp"

namespace qrad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

struct Edge {
  Vec2 n;  // outward unit normal
  double h;  // offset <v, n>
  Vec2 dir;  // unit direction, counterclockwise
};

// Support values of a counterclockwise convex point cycle at `count` uniform
// angles, by a rotating two-pointer walk.
std::vector<double> support_table(const std::vector<Vec2>& pts, int count) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> h(count);
  const Vec2 u0 = unit(0.0);
  int idx = 0;
  for (int k = 1; k < n; ++k)
    if (dot(pts[k], u0) > dot(pts[idx], u0)) idx = k;
  for (int j = 0; j < count; ++j) {
    const Vec2 u = unit(kTwoPi * j / count);
    for (int steps = 0; steps < n; ++steps) {
      const int nxt = (idx + 1) % n;
      if (dot(pts[nxt], u) > dot(pts[idx], u)) idx = nxt;
      else break;
    }
    h[j] = dot(pts[idx], u);
  }
  return h;
}

}  // namespace

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Disk: return "disk";
    case DomainKind::Superellipse: return "superellipse";
    case DomainKind::Polygon: return "polygon";
    case DomainKind::Sampled: return "sampled";
  }
  return "unknown";
}

struct ConvexDomain::Impl {
  DomainKind kind = DomainKind::Disk;
  double radius = 0.0;  // disk
  double a = 0.0, b = 0.0, p = 2.0;  // superellipse
  std::vector<Vec2> vertices;  // polygon
  std::vector<Edge> edges;
  std::vector<double> radii;  // sampled
  std::vector<double> support;  // sampled support table
  double max_radius = 0.0;
  double inradius = 0.0;
  int M = 0;

  double sampled_radius(double phi, double* deriv) const {
    const int n = static_cast<int>(radii.size());
    const double step = kTwoPi / n;
    const double u = wrap_angle(phi) / step;
    int k = static_cast<int>(std::floor(u));
    double s = u - k;
    if (k >= n) { k -= n; }
    auto at = [&](int i) { return radii[((i % n) + n) % n]; };
    const double r0 = at(k), r1 = at(k + 1);
    const double m0 = 0.5 * (at(k + 1) - at(k - 1));
    const double m1 = 0.5 * (at(k + 2) - at(k));
    const double s2 = s * s, s3 = s2 * s;
    if (deriv) {
      const double d = (6 * s2 - 6 * s) * r0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * r1 +
                       (3 * s2 - 2 * s) * m1;
      *deriv = d / step;
    }
    return (2 * s3 - 3 * s2 + 1) * r0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * r1 + (s3 - s2) * m1;
  }

  double gauge(Vec2 x) const {
    switch (kind) {
      case DomainKind::Disk:
        return norm(x) / radius;
      case DomainKind::Superellipse: {
        const double ux = std::fabs(x.x / a), uy = std::fabs(x.y / b);
        const double m = std::fmax(ux, uy);
        if (m == 0.0) return 0.0;
        return m * std::pow(std::pow(ux / m, p) + std::pow(uy / m, p), 1.0 / p);
      }
      case DomainKind::Polygon: {
        double g = -1e300;
        for (const auto& e : edges) g = std::fmax(g, dot(x, e.n) / e.h);
        return g;
      }
      case DomainKind::Sampled: {
        const double r = norm(x);
        if (r == 0.0) return 0.0;
        return r / sampled_radius(arg(x), nullptr);
      }
    }
    return 0.0;
  }

  Vec2 gradient(Vec2 x) const {
    switch (kind) {
      case DomainKind::Disk: {
        const double r = norm(x);
        return x / (r * radius);
      }
      case DomainKind::Superellipse: {
        const double g = gauge(x);
        const double ux = std::fabs(x.x / a), uy = std::fabs(x.y / b);
        const double gx = std::pow(ux / g, p - 1.0) * std::copysign(1.0, x.x) / a;
        const double gy = std::pow(uy / g, p - 1.0) * std::copysign(1.0, x.y) / b;
        return {gx, gy};
      }
      case DomainKind::Polygon: {
        std::size_t best = 0;
        double g = -1e300;
        for (std::size_t k = 0; k < edges.size(); ++k) {
          const double v = dot(x, edges[k].n) / edges[k].h;
          if (v > g) { g = v; best = k; }
        }
        return edges[best].n / edges[best].h;
      }
      case DomainKind::Sampled: {
        const double r = norm(x);
        double dr = 0.0;
        const double R = sampled_radius(arg(x), &dr);
        const Vec2 radial = x / (r * R);
        const Vec2 angular = perp(x) * (dr / (R * R * r));
        return radial - angular;
      }
    }
    return {};
  }

  double support_at(double theta) const {
    switch (kind) {
      case DomainKind::Disk:
        return radius;
      case DomainKind::Superellipse: {
        const double q = p / (p - 1.0);
        const double cx = std::fabs(a * std::cos(theta)), cy = std::fabs(b * std::sin(theta));
        return std::pow(std::pow(cx, q) + std::pow(cy, q), 1.0 / q);
      }
      case DomainKind::Polygon: {
        const Vec2 u = unit(theta);
        double h = -1e300;
        for (const auto& v : vertices) h = std::fmax(h, dot(v, u));
        return h;
      }
      case DomainKind::Sampled: {
        const int n = static_cast<int>(support.size());
        const double u = wrap_angle(theta) / (kTwoPi / n);
        const int k = static_cast<int>(std::floor(u)) % n;
        const double s = u - std::floor(u);
        return (1.0 - s) * support[k] + s * support[(k + 1) % n];
      }
    }
    return 0.0;
  }
};

namespace {

int least_M(double max_radius) {
  int M = 1;
  while (std::ldexp(1.0, M) <= max_radius) ++M;
  return M;
}

void finalize(ConvexDomain::Impl& impl, double min_inradius) {
  const int n = ConvexDomain::kSampledResolution;
  double rmax = 0.0, hmin = 1e300;
  for (int k = 0; k < n; ++k) {
    const double phi = kTwoPi * k / n;
    rmax = std::fmax(rmax, 1.0 / impl.gauge(unit(phi)));
    hmin = std::fmin(hmin, impl.support_at(phi));
  }
  if (impl.kind == DomainKind::Polygon) {
    rmax = 0.0;
    for (const auto& v : impl.vertices) rmax = std::fmax(rmax, norm(v));
    hmin = 1e300;
    for (const auto& e : impl.edges) hmin = std::fmin(hmin, e.h);
  } else if (impl.kind == DomainKind::Disk) {
    rmax = hmin = impl.radius;
  }
  impl.max_radius = rmax;
  impl.inradius = hmin;
  if (hmin < min_inradius * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "domain must contain the closed ball of radius " << min_inradius << " (inradius " << hmin << ")";
    fail(ErrorKind::Validation, os.str());
  }
  impl.M = least_M(rmax);
}

}  // namespace

ConvexDomain ConvexDomain::disk(double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::Validation, "disk radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::Disk;
  impl->radius = radius;
  finalize(*impl, 8.0);
  return ConvexDomain(impl);
}

ConvexDomain ConvexDomain::superellipse(double a, double b, double p) {
  if (!(a > 0.0 && b > 0.0)) fail(ErrorKind::Validation, "superellipse semi-axes must be positive");
  if (!(p > 1.0)) fail(ErrorKind::Validation, "superellipse exponent must exceed 1 for convexity");
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::Superellipse;
  impl->a = a;
  impl->b = b;
  impl->p = p;
  finalize(*impl, 8.0);
  return ConvexDomain(impl);
}

ConvexDomain ConvexDomain::polygon(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) fail(ErrorKind::Validation, "polygon needs at least 3 vertices");
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::Polygon;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e0 = vertices[(k + 1) % n] - vertices[k];
    const Vec2 e1 = vertices[(k + 2) % n] - vertices[(k + 1) % n];
    if (!(cross(e0, e1) > 0.0))
      fail(ErrorKind::Validation, "polygon must be strictly convex with counterclockwise vertices");
    const double len = norm(e0);
    const Vec2 dir = e0 / len;
    const Vec2 nrm{dir.y, -dir.x};
    const double h = dot(vertices[k], nrm);
    if (!(h > 0.0)) fail(ErrorKind::Validation, "polygon must contain the origin in its interior");
    impl->edges.push_back({nrm, h, dir});
  }
  impl->vertices = std::move(vertices);
  finalize(*impl, 8.0);
  return ConvexDomain(impl);
}

ConvexDomain ConvexDomain::regular_polygon(int sides, double circumradius, double first_vertex_angle) {
  std::vector<Vec2> v;
  for (int k = 0; k < sides; ++k) v.push_back(unit(first_vertex_angle + kTwoPi * k / sides) * circumradius);
  return polygon(std::move(v));
}

ConvexDomain ConvexDomain::sampled(std::vector<double> radii, double min_inradius) {
  const int n = static_cast<int>(radii.size());
  if (n < 16) fail(ErrorKind::Validation, "sampled boundary needs at least 16 radii");
  for (double r : radii)
    if (!(r > 0.0)) fail(ErrorKind::Validation, "sampled radii must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::Sampled;
  impl->radii = std::move(radii);
  std::vector<Vec2> pts(n);
  for (int k = 0; k < n; ++k) pts[k] = unit(kTwoPi * k / n) * impl->radii[k];
  for (int k = 0; k < n; ++k) {
    const Vec2 e0 = pts[(k + 1) % n] - pts[k];
    const Vec2 e1 = pts[(k + 2) % n] - pts[(k + 1) % n];
    if (cross(e0, e1) < -1e-9 * norm(e0) * norm(e1))
      fail(ErrorKind::Validation, "sampled boundary is not convex");
  }
  impl->support = support_table(pts, kSampledResolution);
  finalize(*impl, min_inradius);
  const ConvexDomain out(impl);
  if (out.min_support_curvature() < -1e-6 * impl->max_radius)
    fail(ErrorKind::Validation, "sampled boundary fails the support-function convexity test");
  return out;
}

DomainKind ConvexDomain::kind() const { return impl_->kind; }
int ConvexDomain::M() const { return impl_->M; }
double ConvexDomain::max_radius() const { return impl_->max_radius; }
double ConvexDomain::inradius() const { return impl_->inradius; }
double ConvexDomain::gauge(Vec2 x) const { return impl_->gauge(x); }
Vec2 ConvexDomain::gauge_gradient(Vec2 x) const { return impl_->gradient(x); }
double ConvexDomain::radius(double phi) const { return 1.0 / impl_->gauge(unit(phi)); }
Vec2 ConvexDomain::boundary_point(double phi) const { return unit(phi) * radius(phi); }
double ConvexDomain::support(double theta) const { return impl_->support_at(theta); }
const std::vector<Vec2>& ConvexDomain::vertices() const { return impl_->vertices; }

std::vector<Vec2> ConvexDomain::normals_at(Vec2 p) const {
  std::vector<Vec2> out;
  if (impl_->kind == DomainKind::Polygon) {
    const double g = impl_->gauge(p);
    for (const auto& e : impl_->edges)
      if (std::fabs(dot(p, e.n) / e.h - g) <= 1e-9 * g) out.push_back(e.n);
    return out;
  }
  const Vec2 grad = impl_->gradient(p);
  out.push_back(grad / norm(grad));
  return out;
}

std::vector<Vec2> ConvexDomain::tangents_at(Vec2 p) const {
  std::vector<Vec2> out;
  for (const Vec2& n : normals_at(p)) out.push_back(Vec2{-n.y, n.x});
  return out;
}

double ConvexDomain::min_support_curvature(int samples) const {
  std::vector<double> h(samples);
  if (impl_->kind == DomainKind::Sampled && samples == static_cast<int>(impl_->support.size())) {
    h = impl_->support;
  } else {
    for (int k = 0; k < samples; ++k) h[k] = impl_->support_at(kTwoPi * k / samples);
  }
  const double step = kTwoPi / samples;
  double worst = 1e300;
  for (int k = 0; k < samples; ++k) {
    const double hm = h[(k + samples - 1) % samples], hp = h[(k + 1) % samples];
    worst = std::fmin(worst, h[k] + (hp - 2.0 * h[k] + hm) / (step * step));
  }
  return worst;
}

std::string ConvexDomain::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (impl_->kind) {
    case DomainKind::Disk: os << "disk(r=" << impl_->radius << ")"; break;
    case DomainKind::Superellipse:
      os << "superellipse(a=" << impl_->a << ",b=" << impl_->b << ",p=" << impl_->p << ")";
      break;
    case DomainKind::Polygon: os << "polygon(" << impl_->vertices.size() << " vertices)"; break;
    case DomainKind::Sampled: os << "sampled(" << impl_->radii.size() << " radii)"; break;
  }
  return os.str();
}

int compute_M(const ConvexDomain& domain) { return least_M(domain.max_radius()); }

BoundaryArc::BoundaryArc(ConvexDomain domain, double rotation)
    : domain_(std::move(domain)), rotation_(rotation), rot_(Mat2::rotation(rotation)), M_(domain_.M()) {}

double BoundaryArc::height(double t) const {
  if (domain_.kind() == DomainKind::Polygon) {
    double u = 1e300;
    bool any = false;
    for (std::size_t k = 0; k < domain_.vertices().size(); ++k) {
      const Vec2 v0 = domain_.vertices()[k];
      const Vec2 v1 = domain_.vertices()[(k + 1) % domain_.vertices().size()];
      const Vec2 d = (v1 - v0) / norm(v1 - v0);
      const Vec2 n = rot_ * Vec2{d.y, -d.x};
      const double h = dot(v0, Vec2{d.y, -d.x});
      if (n.y > 0.0) {
        u = std::fmin(u, (h - n.x * t) / n.y);
        any = true;
      }
    }
    if (!any) fail(ErrorKind::Geometry, "rotated polygon has no upper edges");
    return u;
  }
  const double top = std::ldexp(1.0, M_);
  auto f = [&](double y) { return domain_.gauge(from_frame(Vec2{t, y})) - 1.0; };
  const double f0 = f(0.0), f1 = f(top);
  if (!(f0 < 0.0 && f1 > 0.0)) fail(ErrorKind::Geometry, "boundary over the window is not a graph");
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 0.0, top, f0, f1,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

void BoundaryArc::slopes(double t, double& left, double& right) const {
  if (domain_.kind() == DomainKind::Polygon) {
    const double u = height(t);
    const std::size_t nv = domain_.vertices().size();
    left = -1e300;
    right = 1e300;
    for (std::size_t k = 0; k < nv; ++k) {
      const Vec2 v0 = domain_.vertices()[k];
      const Vec2 v1 = domain_.vertices()[(k + 1) % nv];
      const Vec2 d = (v1 - v0) / norm(v1 - v0);
      const Vec2 n = rot_ * Vec2{d.y, -d.x};
      const double h = dot(v0, Vec2{d.y, -d.x});
      if (n.y <= 0.0) continue;
      const double val = (h - n.x * t) / n.y;
      if (std::fabs(val - u) <= 1e-10 * std::fmax(1.0, std::fabs(u))) {
        const double slope = -n.x / n.y;
        left = std::fmax(left, slope);
        right = std::fmin(right, slope);
      }
    }
    return;
  }
  const double u = height(t);
  const Vec2 g = rot_ * domain_.gauge_gradient(from_frame(Vec2{t, u}));
  if (!(g.y > 0.0)) fail(ErrorKind::Geometry, "boundary over the window is not a graph");
  left = right = -g.x / g.y;
}

double BoundaryArc::gamma(double t) const { return std::ldexp(1.0, M_) + 1.0 - height(t); }

double BoundaryArc::dL(double t) const {
  double l, r;
  slopes(t, l, r);
  return -l;
}

double BoundaryArc::dR(double t) const {
  double l, r;
  slopes(t, l, r);
  return -r;
}

Vec2 BoundaryArc::point(double t) const { return from_frame(Vec2{t, height(t)}); }

BoundaryArc boundary_arc(const ConvexDomain& domain, double rotation) { return BoundaryArc(domain, rotation); }

namespace {

// Normalized bump c exp(-1/(1-(2x)^2)) on (-1/2, 1/2).
struct Mollifier {
  std::array<double, 64> nodes{}, weights{};
  double c = 1.0;

  Mollifier() {
    // Gauss-Legendre nodes on [-1, 1] by Newton iteration.
    const int n = 64;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    c = 1.0 / mass();
  }

  static double raw(double u) {
    const double q = 1.0 - 4.0 * u * u;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
  }

  double mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * raw(0.5 * nodes[i]);
    return 0.5 * s;
  }

  // Integral over [x0, 1/2] of c raw(u) (u - x0).
  double tail_moment(double x0) const {
    if (x0 >= 0.5) return 0.0;
    const double lo = std::fmax(x0, -0.5);
    const double mid = 0.5 * (0.5 + lo), half = 0.5 * (0.5 - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double u = mid + half * nodes[i];
      s += weights[i] * raw(u) * (u - x0);
    }
    return c * s * half;
  }
};

const Mollifier& mollifier() {
  static const Mollifier m;
  return m;
}

struct SmoothedVertex {
  Mat2 to_frame;  // rotation taking the vertex to the positive x2 axis
  double height;  // |v|
  double slope_left, slope_right;
  double C;  // mollifier scale
  double half_width;  // 1/(2C)
  double angle;  // polar angle of the vertex

  // Mollified upper graph in the vertex frame.
  double graph(double x) const {
    const double linear = height + slope_right * x;
    if (x <= -half_width) return height + slope_left * x;
    if (x >= half_width) return linear;
    // (ell * eta_C)(x) with ell(z) = sR z + (sL - sR) min(z, 0).
    const double I = mollifier().tail_moment(C * x) / C;
    return linear - (slope_left - slope_right) * I;
  }
};

}  // namespace

ConvexDomain smooth_approximate(const ConvexDomain& domain, int n) {
  if (n < 8) fail(ErrorKind::Geometry, "smooth approximation needs n >= 8");
  std::vector<Vec2> v(n);
  for (int i = 0; i < n; ++i) v[i] = domain.boundary_point(0.5 * kPi + kTwoPi * i / n);
  std::vector<SmoothedVertex> sv(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 prev = v[(i + n - 1) % n], cur = v[i], next = v[(i + 1) % n];
    const double d = std::fmin(norm(cur - prev), norm(next - cur));
    SmoothedVertex& s = sv[i];
    s.angle = arg(cur);
    s.to_frame = Mat2::rotation(0.5 * kPi - s.angle);
    s.height = norm(cur);
    const Vec2 pf = s.to_frame * prev, nf = s.to_frame * next;
    // Counterclockwise order: next lies to the left (x < 0) in the vertex frame.
    if (!(nf.x < -0.5 * d && pf.x > 0.5 * d))
      fail(ErrorKind::Geometry, "polygon edges too steep in the vertex frame; increase n");
    s.slope_left = (nf.y - s.height) / nf.x;
    s.slope_right = (pf.y - s.height) / pf.x;
    if (s.slope_left < s.slope_right - 1e-12 * (1.0 + std::fabs(s.slope_right)))
      fail(ErrorKind::Geometry, "inscribed polygon is not convex");
    s.C = 600.0 / d;
    s.half_width = 0.5 / s.C;
  }
  // Radius of the inscribed polygon, which may have collinear vertices.
  auto poly_radius = [&](double phi) {
    const double rel = wrap_angle(phi - 0.5 * kPi) / (kTwoPi / n);
    const int i = static_cast<int>(std::floor(rel)) % n;
    const Vec2 p0 = v[i], p1 = v[(i + 1) % n];
    const Vec2 u = unit(phi);
    return cross(p0, p1) / cross(u, p1 - p0);
  };

  const int res = ConvexDomain::kSampledResolution;
  std::vector<double> radii(res);
  for (int k = 0; k < res; ++k) {
    const double phi = kTwoPi * k / res;
    double r = poly_radius(phi);
    const double rel = wrap_angle(phi - 0.5 * kPi) / (kTwoPi / n);
    const int i = static_cast<int>(std::lround(rel)) % n;
    const SmoothedVertex& s = sv[i];
    const Vec2 w = s.to_frame * unit(phi);
    if (w.y > 0.0 && std::fabs(r * w.x) < s.half_width) {
      auto f = [&](double rr) { return rr * w.y - s.graph(rr * w.x); };
      double lo = r * (1.0 - 1e-3), hi = r;
      while (f(lo) >= 0.0) lo *= 0.99;
      if (f(hi) > 0.0) {
        std::uintmax_t iters = 200;
        const auto root = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f(hi),
                                                            boost::math::tools::eps_tolerance<double>(52), iters);
        r = 0.5 * (root.first + root.second);
      }
    }
    radii[k] = r;
  }
  return ConvexDomain::sampled(std::move(radii), 4.0);
}

ConvexDomain builtin_domain(const std::string& name) {
  if (name == "disk") return ConvexDomain::disk(10.0);
  if (name == "superellipse") return ConvexDomain::superellipse(10.0, 10.0, 4.0);
  if (name == "hexagon") return ConvexDomain::regular_polygon(6, 10.0, 0.5 * kPi);
  if (name == "square") return ConvexDomain::polygon({{-10, -10}, {10, -10}, {10, 10}, {-10, 10}});
  fail(ErrorKind::Validation, "unknown built-in domain: " + name);
}

}  // namespace qrad
