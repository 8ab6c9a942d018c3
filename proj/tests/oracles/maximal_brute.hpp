#pragma once

// Independent oracles shared by the unit and acceptance tests.

#define BOOST_GEOMETRY_NO_ROBUSTNESS

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "qrad/grid.hpp"
#include "qrad/types.hpp"

namespace qrad::oracle {

namespace bg = boost::geometry;

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint>;

inline BPolygon rectangle(double lambda, int N, int dir, double scale) {
  const Vec2 u = unit(std::numbers::pi * dir / N), v = perp(u);
  const double hl = 0.5 * N * lambda * scale, hw = 0.5 * lambda * scale;
  BPolygon p;
  for (const auto& [s, t] : {std::pair{-1, -1}, std::pair{1, -1}, std::pair{1, 1}, std::pair{-1, 1}, std::pair{-1, -1}}) {
    const Vec2 q = u * (s * hl) + v * (t * hw);
    bg::append(p.outer(), BPoint(q.x, q.y));
  }
  bg::correct(p);
  return p;
}

// Nikodym maximal function by brute force: Boost.Geometry cell overlaps
// (robustness rescaling off, it perturbs overlaps by ~1e-6), explicit
// translates by grid offsets, isotropic dilations 2^k.
inline std::vector<double> brute_maximal(const GridField& f, double lambda, int N, const std::vector<int>& scales) {
  const GridSpec& s = f.spec();
  const int G = s.N;
  const double dx = s.dx();
  std::vector<double> out(s.size(), 0.0);
  for (int k : scales)
    for (int dir = 0; dir < N; ++dir) {
      const double sc = std::ldexp(1.0, k);
      const BPolygon R = rectangle(lambda, N, dir, sc);
      const double area = bg::area(R);
      const int reach = static_cast<int>(std::ceil(0.5 * (N + 1) * lambda * sc / dx)) + 2;
      std::map<std::pair<int, int>, double> w;
      for (int c2 = -reach; c2 <= reach; ++c2)
        for (int c1 = -reach; c1 <= reach; ++c1) {
          BPolygon cell;
          const double x = c1 * dx, y = c2 * dx, h = 0.5 * dx;
          for (const auto& [p, q] : {std::pair{-h, -h}, std::pair{h, -h}, std::pair{h, h}, std::pair{-h, h}, std::pair{-h, -h}})
            bg::append(cell.outer(), BPoint(x + p, y + q));
          bg::correct(cell);
          std::vector<BPolygon> parts;
          bg::intersection(cell, R, parts);
          double a = 0.0;
          for (const auto& part : parts) a += bg::area(part);
          if (a > 0.0) w[{c1, c2}] = a;
        }
      std::vector<double> avg(s.size(), 0.0);
      for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) {
          double acc = 0.0;
          for (const auto& [c, v] : w) acc += v * std::abs(f.at(((a + c.second) % G + G) % G, ((b + c.first) % G + G) % G));
          avg[static_cast<std::size_t>(a) * G + b] = acc / area;
        }
      const Vec2 u = unit(std::numbers::pi * dir / N), v = perp(u);
      std::vector<std::pair<int, int>> offsets;
      for (int e2 = -reach; e2 <= reach; ++e2)
        for (int e1 = -reach; e1 <= reach; ++e1) {
          const Vec2 e{e1 * dx, e2 * dx};
          if (std::fabs(dot(e, u)) <= 0.5 * N * lambda * sc + 1e-9 && std::fabs(dot(e, v)) <= 0.5 * lambda * sc + 1e-9)
            offsets.push_back({e1, e2});
        }
      for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) {
          double& o = out[static_cast<std::size_t>(a) * G + b];
          for (const auto& [e1, e2] : offsets)
            o = std::fmax(o, avg[static_cast<std::size_t>(((a - e2) % G + G) % G) * G + ((b - e1) % G + G) % G]);
        }
    }
  return out;
}

// Largest |a - b| over the samples and the largest |b|.
inline std::pair<double, double> max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < b.size(); ++q) {
    diff = std::fmax(diff, std::fabs(a[q] - b[q]));
    scale = std::fmax(scale, std::fabs(b[q]));
  }
  return {diff, scale};
}

}  // namespace qrad::oracle
