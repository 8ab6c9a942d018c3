#include "qrad/capdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qrad/errors.hpp"

namespace qrad {

int CapDecomposition::locate(double x) const {
  if (x <= refined.front().lo) return 0;
  if (x >= refined.back().hi) return static_cast<int>(refined.size()) - 1;
  const auto it = std::upper_bound(refined.begin(), refined.end(), x,
                                   [](double v, const Interval& I) { return v < I.lo; });
  return static_cast<int>(it - refined.begin()) - 1;
}

double admissible_delta(int M) { return std::ldexp(1.0, -M - 4); }

double cap_product(const BoundaryArc& arc, double a, double t) {
  return (t - a) * (arc.dL(t) - arc.dR(a));
}

CapInvariants check_cap_invariants(const BoundaryArc& arc, const std::vector<double>& points, double delta,
                                   double step) {
  CapInvariants c{-delta, -delta};
  const std::size_t Q = points.size() - 1;
  for (std::size_t l = 0; l < Q; ++l) {
    c.left_excess = std::fmax(c.left_excess, cap_product(arc, points[l], points[l + 1]) - delta);
    if (l + 1 < Q) c.right_deficit = std::fmax(c.right_deficit, delta - cap_product(arc, points[l], points[l + 1] + step));
  }
  return c;
}

std::vector<double> cap_decomposition(const BoundaryArc& arc, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::Domain, "cap decomposition needs 0 < delta < 1");
  const double min_step = std::ldexp(delta, -arc.M());
  const double tol = 1e-9;
  std::vector<double> pts{-1.0};
  while (pts.back() < 1.0) {
    const double a = pts.back();
    const double slope_a = arc.dR(a);
    auto F = [&](double t) {
      const double v = (t - a) * (arc.dL(t) - slope_a);
      if (v < -tol) {
        std::ostringstream os;
        os << "boundary derivative data is not convex near t = " << t;
        fail(ErrorKind::Geometry, os.str());
      }
      return v;
    };
    if (F(1.0) <= delta) {
      // Both branches of the terminal case end the sequence at 1.
      pts.push_back(a <= 1.0 - min_step ? 1.0 : std::fmin(1.0, a + min_step));
      continue;
    }
    double lo = a, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (F(mid) > delta) hi = mid;
      else lo = mid;
    }
    pts.push_back(lo);
  }
  return pts;
}

std::vector<Interval> refine_intervals(const std::vector<double>& points, double delta, std::vector<int>* cap_of) {
  std::vector<Interval> out;
  if (cap_of) cap_of->clear();
  for (std::size_t l = 0; l + 1 < points.size(); ++l) {
    const double a = points[l], b = points[l + 1];
    const double len = b - a;
    const int K = std::max(0, static_cast<int>(std::ceil(std::log2(len / delta))));
    double x = a;
    for (int k = 1; k <= K; ++k) {
      const double next = a + len * (1.0 - std::ldexp(1.0, -k));
      out.push_back({x, next});
      x = next;
    }
    out.push_back({x, b});
    if (cap_of) cap_of->resize(out.size(), static_cast<int>(l));
  }
  return out;
}

CapDecomposition decompose(const BoundaryArc& arc, double delta) {
  CapDecomposition d;
  d.delta = delta;
  d.points = cap_decomposition(arc, delta);
  d.refined = refine_intervals(d.points, delta, &d.cap_of);
  d.Q = static_cast<int>(d.points.size()) - 1;
  d.Qprime = static_cast<int>(d.refined.size());
  d.admissible = delta < admissible_delta(arc.M());
  return d;
}

}  // namespace qrad
