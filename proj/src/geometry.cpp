#include "qrad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qrad {

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  Polygon h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

namespace {

// Rotate so the lowest (then leftmost) vertex comes first.
Polygon normalize_start(const Polygon& p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].y < p[best].y || (p[i].y == p[best].y && p[i].x < p[best].x)) best = i;
  Polygon out(p.begin() + static_cast<std::ptrdiff_t>(best), p.end());
  out.insert(out.end(), p.begin(), p.begin() + static_cast<std::ptrdiff_t>(best));
  return out;
}

}  // namespace

Polygon minkowski_sum(const Polygon& a0, const Polygon& b0) {
  if (a0.empty()) return b0;
  if (b0.empty()) return a0;
  const Polygon a = normalize_start(a0), b = normalize_start(b0);
  const std::size_t na = a.size(), nb = b.size();
  Polygon out;
  out.reserve(na + nb);
  std::size_t i = 0, j = 0;
  while (i < na || j < nb) {
    out.push_back(a[i % na] + b[j % nb]);
    const Vec2 ea = a[(i + 1) % na] - a[i % na];
    const Vec2 eb = b[(j + 1) % nb] - b[j % nb];
    const double c = cross(ea, eb);
    if (j >= nb || (i < na && c > 0.0)) ++i;
    else if (i >= na || c < 0.0) ++j;
    else { ++i; ++j; }
  }
  return convex_hull(out);
}

Polygon circumscribed_disk(double radius, int sides) {
  Polygon p;
  const double R = radius / std::cos(std::numbers::pi / sides);
  for (int k = 0; k < sides; ++k) p.push_back(unit(2.0 * std::numbers::pi * k / sides) * R);
  return p;
}

double polygon_area(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * s;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  for (std::size_t e = 0; e < clip.size() && !out.empty(); ++e) {
    const Vec2 a = clip[e], b = clip[(e + 1) % clip.size()];
    const Vec2 d = b - a;
    Polygon in;
    in.swap(out);
    for (std::size_t k = 0; k < in.size(); ++k) {
      const Vec2 p = in[k], q = in[(k + 1) % in.size()];
      const double sp = cross(d, p - a), sq = cross(d, q - a);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) out.push_back(p + (q - p) * (sp / (sp - sq)));
    }
  }
  return out;
}

bool contains_convex(const Polygon& p, Vec2 x) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (cross(p[(i + 1) % p.size()] - p[i], x - p[i]) < 0.0) return false;
  return !p.empty();
}

bool horizontal_span(const Polygon& p, double y, double& lo, double& hi) {
  lo = 1e300;
  hi = -1e300;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 a = p[i], b = p[(i + 1) % p.size()];
    if ((a.y <= y && y <= b.y) || (b.y <= y && y <= a.y)) {
      if (a.y == b.y) {
        lo = std::fmin(lo, std::fmin(a.x, b.x));
        hi = std::fmax(hi, std::fmax(a.x, b.x));
      } else {
        const double x = a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
        lo = std::fmin(lo, x);
        hi = std::fmax(hi, x);
      }
    }
  }
  return lo <= hi;
}

}  // namespace qrad
