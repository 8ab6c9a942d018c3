#include "qrad/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frame_rotation(double center) { return 0.5 * kPi - center; }

// Unwrapped polar angle of the boundary point at abscissa x in the frame
// centred on direction `center`.
double angle_at(const ConvexDomain& domain, double center, double x) {
  const BoundaryArc arc(domain, frame_rotation(center));
  const Vec2 p = arc.point(x);
  return center + std::remainder(arg(p) - center, kTwoPi);
}

// Centre direction whose window starts (x = +w) at polar angle `target`.
double next_center(const ConvexDomain& domain, double target, double w) {
  double lo = target, hi = target + 0.5 * kPi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (angle_at(domain, mid, w) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Centres of `count` abutting windows of half-width w starting at pi/2; returns
// the angle by which the last window overshoots a full turn.
double chain(const ConvexDomain& domain, double w, int count, std::vector<double>* centers) {
  double center = 0.5 * kPi;
  const double start = angle_at(domain, center, w);
  if (centers) centers->assign(1, center);
  double end = angle_at(domain, center, -w);
  for (int k = 1; k < count; ++k) {
    center = next_center(domain, end, w);
    if (centers) centers->push_back(center);
    end = angle_at(domain, center, -w);
  }
  return end - start - kTwoPi;
}

double log_ratio(double delta) { return std::log((1.0 + 2.0 * delta) / (1.0 - 2.0 * delta)); }

}  // namespace

SectorSystem::SectorSystem(const CompatiblePair& pair) : pair_(pair) {
  const ConvexDomain& dom = pair.domain();
  int K = 1;
  {
    double center = 0.5 * kPi;
    const double start = angle_at(dom, center, kMaxHalfWidth);
    double end = angle_at(dom, center, -kMaxHalfWidth);
    while (end < start + kTwoPi) {
      center = next_center(dom, end, kMaxHalfWidth);
      end = angle_at(dom, center, -kMaxHalfWidth);
      ++K;
      if (K > 10000) fail(ErrorKind::Geometry, "sector windows do not cover the boundary");
    }
  }
  double lo = kPlateau + 0.02, hi = kMaxHalfWidth;
  if (chain(dom, lo, K, nullptr) > 0.0) fail(ErrorKind::Geometry, "sector windows cannot be made uniform");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chain(dom, mid, K, nullptr) < 0.0) lo = mid;
    else hi = mid;
  }
  w_ = hi;
  std::vector<double> centers;
  chain(dom, w_, K, &centers);
  sectors_.resize(K);
  for (int i = 0; i < K; ++i) {
    Sector& s = sectors_[i];
    s.index = i;
    s.center = centers[i];
    s.rot = Mat2::rotation(frame_rotation(centers[i]));
    s.start = angle_at(dom, s.center, w_);
    s.end = angle_at(dom, s.center, -w_);
    s.ext_start = angle_at(dom, s.center, 1.0);
    s.ext_end = angle_at(dom, s.center, -1.0);
    s.plateau_start = angle_at(dom, s.center, kPlateau);
    s.plateau_end = angle_at(dom, s.center, -kPlateau);
    const BoundaryArc arc(dom, frame_rotation(s.center));
    s.seed = arc.point(-1.0);
    s.seed_prime = arc.point(1.0);
  }
  for (int i = 0; i + 1 < K; ++i) sectors_[i].end = sectors_[i + 1].start;
  sectors_[K - 1].end = sectors_[0].start + kTwoPi;
}

BoundaryArc SectorSystem::arc(int i) const {
  return BoundaryArc(pair_.domain(), frame_rotation(sectors_[i].center));
}

int SectorSystem::sector_of(double angle) const {
  const double s0 = sectors_[0].start;
  double a = s0 + std::fmod(angle - s0, kTwoPi);
  if (a < s0) a += kTwoPi;
  int lo = 0, hi = size() - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (sectors_[mid].start <= a) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

void SectorSystem::extended_sectors(Vec2 p, std::vector<int>& out) const {
  out.clear();
  const int K = size();
  const int s = sector_of(arg(p));
  const int reach = std::min(K / 2, 4);
  for (int d = -reach; d <= reach; ++d) {
    const int i = ((s + d) % K + K) % K;
    const Vec2 q = sectors_[i].rot * p;
    if (q.y > 0.0 && q.x >= -1.0 && q.x <= 1.0) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

double SectorSystem::Psi(int i, double angle) const {
  const int K = size();
  const int s = sector_of(angle);
  const double s0 = sectors_[0].start;
  double a = s0 + std::fmod(angle - s0, kTwoPi);
  if (a < s0) a += kTwoPi;
  const Sector& S = sectors_[s];
  if (a >= S.plateau_start && a <= S.plateau_end) return i == s ? 1.0 : 0.0;
  int left, right;
  double lo, hi;
  if (a > S.plateau_end) {
    left = s;
    right = (s + 1) % K;
    lo = S.plateau_end;
    hi = sectors_[right].plateau_start + (right == 0 ? kTwoPi : 0.0);
  } else {
    left = (s + K - 1) % K;
    right = s;
    lo = sectors_[left].plateau_end - (s == 0 ? kTwoPi : 0.0);
    hi = S.plateau_start;
  }
  const double y = (a - lo) / (hi - lo);
  double v = 0.0;
  if (i == left) v += smooth_step(1.0 - y);
  if (i == right) v += smooth_step(y);
  return v;
}

std::shared_ptr<const SectorSystem> build_sectors(const CompatiblePair& pair) {
  return std::make_shared<const SectorSystem>(pair);
}

int tiling_N_delta(double delta) {
  return static_cast<int>(std::floor(std::log(0.5 / (1.0 - 2.0 * delta)) / log_ratio(delta)));
}

int tiling_Nprime_delta(double delta) {
  return static_cast<int>(std::ceil(std::log(2.0 / (1.0 + 2.0 * delta)) / log_ratio(delta)));
}

Tiling::Tiling(std::shared_ptr<const SectorSystem> sectors, double delta, int n_min, int n_max)
    : sectors_(std::move(sectors)), delta_(delta), n_min_(n_min), n_max_(n_max) {
  if (!(delta > 0.0 && delta < 0.25)) fail(ErrorKind::Domain, "tiling needs 0 < delta < 1/4");
  r_ = (1.0 + 2.0 * delta) / (1.0 - 2.0 * delta);
  N_delta_ = tiling_N_delta(delta);
  Nprime_delta_ = tiling_Nprime_delta(delta);
  const int K = sectors_->size();
  caps_.reserve(K);
  arcs_.reserve(K);
  for (int i = 0; i < K; ++i) {
    arcs_.push_back(sectors_->arc(i));
    caps_.push_back(decompose(arcs_.back(), delta));
  }
}

Tiling build_tiling(const CompatiblePair& pair, double delta, int n_min, int n_max) {
  return Tiling(build_sectors(pair), delta, n_min, n_max);
}

Vec2 Tiling::boundary_point(int i, double x) const { return arcs_[i].point(x); }

void Tiling::rho_range(const TileIndex& t, double& lo, double& hi) const {
  const double scale = std::ldexp(std::pow(r_, t.m), 2 * t.n);
  lo = scale * (1.0 - 2.0 * delta_);
  hi = scale * (1.0 + 2.0 * delta_);
}

bool Tiling::contains(const TileIndex& t, double rho, Vec2 proj) const {
  double lo, hi;
  rho_range(t, lo, hi);
  if (rho < lo || rho > hi) return false;
  const Vec2 q = sectors_->sectors()[t.i].rot * proj;
  if (!(q.y > 0.0)) return false;
  return caps_[t.i].refined[t.j].contains(q.x);
}

bool Tiling::contains(const TileIndex& t, Vec2 xi) const {
  const DilationGroup& g = pair().group();
  const Vec2 base = g.power(std::pow(r_, -t.m)) * (g.power(std::ldexp(1.0, -2 * t.n)) * xi);
  double rho;
  Vec2 proj;
  pair().rho_and_project(base, rho, proj);
  if (rho < 1.0 - 2.0 * delta_ || rho > 1.0 + 2.0 * delta_) return false;
  const Vec2 q = sectors_->sectors()[t.i].rot * proj;
  if (!(q.y > 0.0)) return false;
  return caps_[t.i].refined[t.j].contains(q.x);
}

void Tiling::tiles_at(double rho, Vec2 proj, std::vector<TileIndex>& out) const {
  out.clear();
  if (!(rho > 0.0)) return;
  thread_local std::vector<int> secs;
  sectors_->extended_sectors(proj, secs);
  const double lr = std::log(r_);
  for (int i : secs) {
    const double x = (sectors_->sectors()[i].rot * proj).x;
    const CapDecomposition& c = caps_[i];
    int j0 = c.locate(x);
    for (int j = std::max(0, j0 - 1); j <= std::min(c.Qprime - 1, j0 + 1); ++j) {
      if (!c.refined[j].contains(x)) continue;
      for (int n = n_min_; n <= n_max_; ++n) {
        const double base = std::ldexp(rho, -2 * n);
        const int mc = static_cast<int>(std::floor(std::log(base / (1.0 - 2.0 * delta_)) / lr));
        for (int m = mc - 1; m <= mc + 1; ++m) {
          if (m < N_delta_ || m > Nprime_delta_) continue;
          double lo, hi;
          rho_range({i, j, m, n}, lo, hi);
          if (rho >= lo && rho <= hi) out.push_back({i, j, m, n});
        }
      }
    }
  }
}

Polygon Tiling::hull(const TileIndex& t, int samples) const {
  const DilationGroup& g = pair().group();
  const Interval I = caps_[t.i].refined[t.j];
  const Mat2 D = g.power(std::ldexp(std::pow(r_, t.m), 2 * t.n));
  const Mat2 inner = g.power(1.0 - 2.0 * delta_), outer = g.power(1.0 + 2.0 * delta_);
  std::vector<Vec2> pts;
  for (int k = 0; k <= samples; ++k) {
    const Vec2 p = arcs_[t.i].point(I.lo + (I.hi - I.lo) * k / samples);
    pts.push_back(D * (inner * p));
    pts.push_back(D * (outer * p));
  }
  for (double x : {I.lo, I.hi}) {
    const Vec2 p = arcs_[t.i].point(x);
    for (int k = 1; k < 8; ++k) {
      const double s = (1.0 - 2.0 * delta_) + 4.0 * delta_ * k / 8.0;
      pts.push_back(D * (g.power(s) * p));
    }
  }
  return convex_hull(std::move(pts));
}

OverlapReport tile_multiplicity(const Tiling& tiling, int N) {
  const CompatiblePair& pair = tiling.pair();
  // rho <= 2 lies inside 2^A applied to the ball of radius max_radius.
  const Mat2 P = pair.group().power(2.0);
  double ext = 0.0;
  for (int k = 0; k < 720; ++k) ext = std::fmax(ext, norm(P * unit(kTwoPi * k / 720)));
  ext *= pair.domain().max_radius() * 1.01;
  const double h = 2.0 * ext / N;
  OverlapReport rep;
  rep.delta = tiling.delta();
  rep.spacing = h;
  std::vector<std::vector<int>> counts(N, std::vector<int>(N, -1));
#pragma omp parallel for schedule(dynamic)
  for (int a = 0; a < N; ++a) {
    std::vector<TileIndex> found;
    for (int b = 0; b < N; ++b) {
      const Vec2 xi{-ext + (b + 0.5) * h, -ext + (a + 0.5) * h};
      double rho;
      Vec2 proj;
      pair.rho_and_project(xi, rho, proj);
      if (rho < 0.5 || rho > 2.0) continue;
      tiling.tiles_at(rho, proj, found);
      counts[a][b] = static_cast<int>(found.size());
    }
  }
  for (const auto& row : counts)
    for (int c : row) {
      if (c < 0) continue;
      ++rep.histogram[c];
      rep.max_overlap = std::max(rep.max_overlap, c);
    }
  return rep;
}

std::vector<TileIndex> level_tiles(const Tiling& tiling, double t, const SumOverlapOptions& opt) {
  const CompatiblePair& pair = tiling.pair();
  const DilationGroup& g = pair.group();
  const double level = 1.0 / t;
  const int k = static_cast<int>(std::lround(std::log(level) / std::log(16.0)));
  const double base = level * std::pow(16.0, -k);
  if (base < 0.25 || base > 4.0) fail(ErrorKind::Configuration, "level set does not meet T_1");
  const Mat2 to_T0 = g.power(base);
  const double step = tiling.delta() / (16.0 * pair.domain().max_radius());
  const int count = static_cast<int>(std::ceil(kTwoPi / step));
  std::set<TileIndex> found;
  std::vector<TileIndex> here;
  for (int q = 0; q < count; ++q) {
    const Vec2 p = pair.domain().boundary_point(kTwoPi * q / count);
    const Vec2 z = to_T0 * p;
    if (std::fabs(z.x) > opt.window) continue;
    if (!opt.both_halves && !(z.y > 0.0)) continue;
    tiling.tiles_at(level, p, here);
    found.insert(here.begin(), here.end());
  }
  return {found.begin(), found.end()};
}

namespace {

// Counts, at the points of a lattice of spacing h, how many of the convex
// polygons contain each point.
OverlapReport count_polygon_overlaps(const std::vector<Polygon>& polys, double h) {
  OverlapReport rep;
  rep.spacing = h;
  rep.family_size = static_cast<int>(polys.size());
  if (polys.empty()) return rep;
  double y0 = 1e300, y1 = -1e300;
  for (const auto& p : polys)
    for (const Vec2& v : p) {
      y0 = std::fmin(y0, v.y);
      y1 = std::fmax(y1, v.y);
    }
  const long row0 = static_cast<long>(std::floor(y0 / h));
  const long rows = static_cast<long>(std::floor(y1 / h)) - row0 + 1;
  std::vector<std::vector<std::pair<long, int>>> events(rows);
  for (const auto& p : polys) {
    double py0 = 1e300, py1 = -1e300;
    for (const Vec2& v : p) {
      py0 = std::fmin(py0, v.y);
      py1 = std::fmax(py1, v.y);
    }
    for (long r = static_cast<long>(std::ceil(py0 / h)); r * h <= py1; ++r) {
      double lo, hi;
      if (!horizontal_span(p, r * h, lo, hi)) continue;
      const long c0 = static_cast<long>(std::ceil(lo / h));
      const long c1 = static_cast<long>(std::floor(hi / h));
      if (c1 < c0) continue;
      events[r - row0].push_back({c0, 1});
      events[r - row0].push_back({c1 + 1, -1});
    }
  }
  for (auto& ev : events) {
    if (ev.empty()) continue;
    std::sort(ev.begin(), ev.end());
    int cur = 0;
    for (std::size_t e = 0; e < ev.size();) {
      const long col = ev[e].first;
      while (e < ev.size() && ev[e].first == col) cur += ev[e++].second;
      if (e < ev.size() && cur > 0) {
        rep.histogram[cur] += ev[e].first - col;
        rep.max_overlap = std::max(rep.max_overlap, cur);
      }
    }
  }
  return rep;
}

void check_spacing(double delta, const SumOverlapOptions& opt) {
  if (opt.spacing_factor > 0.25)
    fail(ErrorKind::Configuration, "sample spacing coarser than delta/4");
  (void)delta;
}

}  // namespace

OverlapReport count_sum_overlaps(const Tiling& tiling, double u, double t, const SumOverlapOptions& opt) {
  check_spacing(tiling.delta(), opt);
  if (!(u / t > 0.5 && u / t < 2.0)) fail(ErrorKind::Domain, "sum overlaps need 1/2 < u/t < 2");
  const double h = opt.spacing_factor * tiling.delta();
  const auto At = level_tiles(tiling, t, opt);
  const auto Au = (u == t) ? At : level_tiles(tiling, u, opt);
  std::vector<Polygon> hu;
  hu.reserve(Au.size());
  for (const auto& b : Au) hu.push_back(tiling.hull(b));
  std::vector<Polygon> ht;
  ht.reserve(At.size());
  for (const auto& a : At) ht.push_back(tiling.hull(a));
  const Polygon pad = circumscribed_disk(h, 8);
  std::vector<Polygon> sums;
  for (std::size_t a = 0; a < At.size(); ++a) {
    const Polygon ap = minkowski_sum(ht[a], pad);
    for (std::size_t b = (u == t ? a : 0); b < Au.size(); ++b) sums.push_back(minkowski_sum(ap, hu[b]));
  }
  OverlapReport rep = count_polygon_overlaps(sums, h);
  rep.delta = tiling.delta();
  rep.family_size = static_cast<int>(At.size());
  return rep;
}

OverlapReport count_ball_sum_overlaps(const Tiling& tiling, double u, double t, const SumOverlapOptions& opt) {
  check_spacing(tiling.delta(), opt);
  const double h = opt.spacing_factor * tiling.delta();
  const auto Au = level_tiles(tiling, u, opt);
  const CompatiblePair& pair = tiling.pair();
  const Mat2 S = pair.group().power(2.0 / t);
  std::vector<Vec2> ball_pts;
  const int sides = 128;
  for (int k = 0; k < sides; ++k) ball_pts.push_back(S * pair.domain().boundary_point(kTwoPi * k / sides));
  Polygon ball = convex_hull(ball_pts);
  // Chord sagitta bound for the sampled ball, plus one lattice cell.
  double diam = 0.0;
  for (const Vec2& v : ball) diam = std::fmax(diam, norm(v));
  const double slack = diam * (1.0 - std::cos(kPi / sides)) * 4.0 + h;
  ball = minkowski_sum(ball, circumscribed_disk(slack, 8));
  std::vector<Polygon> sets;
  for (const auto& a : Au) sets.push_back(minkowski_sum(tiling.hull(a), ball));
  OverlapReport rep = count_polygon_overlaps(sets, h);
  rep.delta = tiling.delta();
  return rep;
}

double active_time_measure(const Tiling& tiling, const TileIndex& tile, double t_lo, double t_hi) {
  double lo, hi;
  tiling.rho_range(tile, lo, hi);
  const double d = tiling.delta();
  const double step = d / 16.0;
  const double s0 = std::log(t_lo), s1 = std::log(t_hi);
  const int count = static_cast<int>(std::ceil((s1 - s0) / step));
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    const double a = s0 + k * step, b = std::fmin(s1, a + step);
    const double t = std::exp(0.5 * (a + b));
    if (t * (1.0 + d) >= lo && t * (1.0 - d) <= hi) total += b - a;
  }
  return total;
}

}  // namespace qrad
