#include "qrad/maximal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fft_internal.hpp"
#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

using cvec = std::vector<std::complex<double>>;

struct RealPlans {
  fftw_plan r2c = nullptr, c2r = nullptr;
};

RealPlans real_plans(int G) {
  static std::map<int, RealPlans> cache;
  std::lock_guard<std::mutex> lock(detail::fft_planner_mutex());
  auto it = cache.find(G);
  if (it != cache.end()) return it->second;
  std::vector<double> r(static_cast<std::size_t>(G) * G);
  cvec c(static_cast<std::size_t>(G) * (G / 2 + 1));
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());
  RealPlans p;
  p.r2c = fftw_plan_dft_r2c_2d(G, G, r.data(), cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_2d(G, G, cp, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.r2c || !p.c2r) fail(ErrorKind::Numeric, "FFT plan creation failed");
  cache[G] = p;
  return p;
}

cvec forward_real(std::vector<double> r, int G) {
  cvec c(static_cast<std::size_t>(G) * (G / 2 + 1));
  fftw_execute_dft_r2c(real_plans(G).r2c, r.data(), reinterpret_cast<fftw_complex*>(c.data()));
  return c;
}

std::vector<double> inverse_real(cvec c, int G) {
  std::vector<double> r(static_cast<std::size_t>(G) * G);
  fftw_execute_dft_c2r(real_plans(G).c2r, reinterpret_cast<fftw_complex*>(c.data()), r.data());
  const double s = 1.0 / (static_cast<double>(G) * G);
  for (double& v : r) v *= s;
  return r;
}

int wrap(int i, int G) {
  i %= G;
  return i < 0 ? i + G : i;
}

// Offsets d with d dx inside the shape, grouped in lines along the axis that
// gives fewer lines: line `off`, positions lo..hi along the other axis.
struct OffsetLines {
  bool transposed = false;  // lines are columns (fixed d1)
  std::vector<int> off, lo, hi;
  int max_len = 0;
};

OffsetLines offset_lines(const RectangleFamily& fam, int dir, int k, double dx) {
  const Polygon S = family_shape(fam, dir, k);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Vec2& p : S) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int i1 = static_cast<int>(std::floor(xmin / dx)) - 1, i2 = static_cast<int>(std::ceil(xmax / dx)) + 1;
  const int j1 = static_cast<int>(std::floor(ymin / dx)) - 1, j2 = static_cast<int>(std::ceil(ymax / dx)) + 1;
  const double tol = 1e-9 * dx;
  OffsetLines L;
  L.transposed = (j2 - j1) > (i2 - i1);
  const int o1 = L.transposed ? i1 : j1, o2 = L.transposed ? i2 : j2;
  const int p1 = L.transposed ? j1 : i1, p2 = L.transposed ? j2 : i2;
  for (int o = o1; o <= o2; ++o) {
    int lo = 1, hi = 0;
    bool found = false;
    for (int p = p1; p <= p2; ++p) {
      const Vec2 x = L.transposed ? Vec2{o * dx, p * dx} : Vec2{p * dx, o * dx};
      if (!family_shape_contains(fam, dir, k, x, tol)) continue;
      if (!found) lo = p;
      hi = p;
      found = true;
    }
    if (!found) continue;
    L.off.push_back(o);
    L.lo.push_back(lo);
    L.hi.push_back(hi);
    L.max_len = std::max(L.max_len, hi - lo + 1);
  }
  return L;
}

// Periodic range-maximum tables along rows of a G x G array.
class RowSparseTable {
 public:
  RowSparseTable(std::vector<double> base, int G, int max_len) : G_(G) {
    const int levels = max_len > 1 ? std::bit_width(static_cast<unsigned>(max_len)) : 1;
    table_.push_back(std::move(base));
    for (int j = 1; j < levels; ++j) {
      const auto& prev = table_.back();
      std::vector<double> next(prev.size());
      const int h = 1 << (j - 1);
      for (int a = 0; a < G; ++a) {
        const double* row = prev.data() + static_cast<std::size_t>(a) * G;
        double* out = next.data() + static_cast<std::size_t>(a) * G;
        for (int b = 0; b < G; ++b) out[b] = std::max(row[b], row[(b + h) % G]);
      }
      table_.push_back(std::move(next));
    }
  }

  // max over row a, positions start .. start + len - 1 (mod G).
  double query(int a, int start, int len) const {
    const int j = std::bit_width(static_cast<unsigned>(len)) - 1;
    const double* row = table_[j].data() + static_cast<std::size_t>(a) * G_;
    return std::max(row[start], row[(start + len - (1 << j)) % G_]);
  }

 private:
  int G_;
  std::vector<std::vector<double>> table_;
};

std::vector<double> transpose(const std::vector<double>& v, int G) {
  std::vector<double> t(v.size());
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) t[static_cast<std::size_t>(b) * G + a] = v[static_cast<std::size_t>(a) * G + b];
  return t;
}

void check_resolution(const GridField& f, const RectangleFamily& fam) {
  if (fam.N < 1) fail(ErrorKind::Configuration, "eccentricity N must be at least 1");
  if (fam.scales.empty()) fail(ErrorKind::Configuration, "rectangle family has no scales");
  if (f.spec().dx() > fam.lambda / 4.0 * (1.0 + 1e-12))
    fail(ErrorKind::Configuration, "grid spacing exceeds lambda/4");
  if (f.space() != Space::Physical) fail(ErrorKind::Validation, "maximal function needs a physical field");
}

// Folds the maximal function over one shape into `out`.
void accumulate_shape(const cvec& fhat, const RectangleFamily& fam, int dir, int k, const GridSpec& spec, int stride,
                      std::vector<double>& out) {
  const int G = spec.N;
  const double dx = spec.dx();
  const Polygon S = family_shape(fam, dir, k);
  const CellWeights W = cell_weights(S, dx);
  // Kernel k(e) = w(-e) / |S| so that avg = k * |f|.
  double total = 0.0;
  for (double v : W.w) total += v;
  std::vector<double> ker(static_cast<std::size_t>(G) * G, 0.0);
  for (int c2 = W.c2_min; c2 < W.c2_min + W.height; ++c2)
    for (int c1 = W.c1_min; c1 < W.c1_min + W.width; ++c1) {
      const double v = W.at(c1, c2);
      if (v != 0.0) ker[static_cast<std::size_t>(wrap(-c2, G)) * G + wrap(-c1, G)] += v / total;
    }
  cvec kh = forward_real(std::move(ker), G);
  for (std::size_t q = 0; q < kh.size(); ++q) kh[q] *= fhat[q];
  std::vector<double> avg = inverse_real(std::move(kh), G);
  for (double& v : avg) v = std::max(v, 0.0);

  const OffsetLines lines = offset_lines(fam, dir, k, dx);
  if (lines.off.empty()) return;
  const RowSparseTable table(lines.transposed ? transpose(avg, G) : std::move(avg), G, lines.max_len);
  const int n = G / stride;
#pragma omp parallel for schedule(static)
  for (int ea = 0; ea < n; ++ea) {
    const int a = ea * stride;
    for (int eb = 0; eb < n; ++eb) {
      const int b = eb * stride;
      double best = 0.0;
      for (std::size_t l = 0; l < lines.off.size(); ++l) {
        const int len = lines.hi[l] - lines.lo[l] + 1;
        double v;
        if (lines.transposed) v = table.query(wrap(b - lines.off[l], G), wrap(a - lines.hi[l], G), len);
        else v = table.query(wrap(a - lines.off[l], G), wrap(b - lines.hi[l], G), len);
        best = std::max(best, v);
      }
      double& o = out[static_cast<std::size_t>(ea) * n + eb];
      o = std::max(o, best);
    }
  }
}

MaximalField maximal_over(const GridField& f, const RectangleFamily& fam, const std::vector<int>& scales,
                          const MaximalOptions& opt) {
  check_resolution(f, fam);
  const GridSpec& spec = f.spec();
  const int G = spec.N;
  if (opt.eval_stride < 1 || G % opt.eval_stride != 0)
    fail(ErrorKind::Configuration, "evaluation stride must divide the grid size");
  std::vector<double> absf(spec.size());
  for (std::size_t q = 0; q < absf.size(); ++q) absf[q] = std::abs(f.values()[q]);
  const cvec fhat = forward_real(std::move(absf), G);
  MaximalField M;
  M.spec = spec;
  M.stride = opt.eval_stride;
  M.values.assign(static_cast<std::size_t>(M.size()) * M.size(), 0.0);
  for (int k : scales)
    for (int dir = 0; dir < fam.N; ++dir) accumulate_shape(fhat, fam, dir, k, spec, opt.eval_stride, M.values);
  return M;
}

}  // namespace

Polygon family_shape(const RectangleFamily& fam, int direction, int scale) {
  const double th = std::numbers::pi * direction / fam.N;
  const Vec2 u = unit(th), v = perp(u);
  const double hl = 0.5 * fam.N * fam.lambda, hw = 0.5 * fam.lambda;
  const Mat2 D = fam.group.power(std::ldexp(1.0, scale));
  Polygon P{
      D * Vec2{-hl * u.x - hw * v.x, -hl * u.y - hw * v.y},
      D * Vec2{hl * u.x - hw * v.x, hl * u.y - hw * v.y},
      D * Vec2{hl * u.x + hw * v.x, hl * u.y + hw * v.y},
      D * Vec2{-hl * u.x + hw * v.x, -hl * u.y + hw * v.y},
  };
  return P;
}

bool family_shape_contains(const RectangleFamily& fam, int direction, int scale, Vec2 p, double tol) {
  const double th = std::numbers::pi * direction / fam.N;
  const Vec2 u = unit(th), v = perp(u);
  const Mat2 Dinv = fam.group.power(std::ldexp(1.0, -scale));
  const Vec2 q = Dinv * p;
  const double t = tol * 2.0 * Dinv.max_abs();
  return std::fabs(dot(q, u)) <= 0.5 * fam.N * fam.lambda + t && std::fabs(dot(q, v)) <= 0.5 * fam.lambda + t;
}

CellWeights cell_weights(const Polygon& shape, double dx) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Vec2& p : shape) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  CellWeights W;
  W.c1_min = static_cast<int>(std::floor(xmin / dx - 0.5));
  W.c2_min = static_cast<int>(std::floor(ymin / dx - 0.5));
  W.width = static_cast<int>(std::ceil(xmax / dx + 0.5)) - W.c1_min + 1;
  W.height = static_cast<int>(std::ceil(ymax / dx + 0.5)) - W.c2_min + 1;
  W.w.assign(static_cast<std::size_t>(W.width) * W.height, 0.0);
  const double h = 0.5 * dx;
  for (int r = 0; r < W.height; ++r)
    for (int c = 0; c < W.width; ++c) {
      const double cx = (W.c1_min + c) * dx, cy = (W.c2_min + r) * dx;
      const Polygon cell{{cx - h, cy - h}, {cx + h, cy - h}, {cx + h, cy + h}, {cx - h, cy + h}};
      bool inside = true;
      for (const Vec2& p : cell) inside = inside && contains_convex(shape, p);
      const double a = inside ? dx * dx : polygon_area(clip_convex(cell, shape));
      W.w[static_cast<std::size_t>(r) * W.width + c] = a;
    }
  return W;
}

double MaximalField::l2() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  const double cell = stride * spec.dx();
  return std::sqrt(s * cell * cell);
}

double MaximalField::measure_above(double level) const {
  std::size_t n = 0;
  for (double v : values)
    if (v > level) ++n;
  const double cell = stride * spec.dx();
  return n * cell * cell;
}

MaximalField nikodym_maximal(const GridField& f, const RectangleFamily& fam, const MaximalOptions& opt) {
  return maximal_over(f, fam, fam.scales, opt);
}

MaximalField nikodym_maximal_scale(const GridField& f, const RectangleFamily& fam, int k, const MaximalOptions& opt) {
  return maximal_over(f, fam, {k}, opt);
}

GridField kakeya_bush(const GridSpec& spec, const RectangleFamily& fam) {
  GridField f(spec);
  const double dx = spec.dx();
  const int G = spec.N;
  for (int dir = 0; dir < fam.N; ++dir) {
    const CellWeights W = cell_weights(family_shape(fam, dir, 0), dx);
    for (int c2 = W.c2_min; c2 < W.c2_min + W.height; ++c2)
      for (int c1 = W.c1_min; c1 < W.c1_min + W.width; ++c1) {
        const double v = W.at(c1, c2);
        if (v == 0.0) continue;
        // Grid point (a, b) sits at (-L + b dx, -L + a dx); the origin is index G/2.
        f.at(wrap(c2 + G / 2, G), wrap(c1 + G / 2, G)) += v / (dx * dx);
      }
  }
  return f;
}

GridField ball_indicator(const GridSpec& spec, double r) {
  GridField f(spec);
  const double dx = spec.dx();
  const int G = spec.N;
  Polygon disk;
  for (int k = 0; k < 64; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 64;
    disk.push_back({r * std::cos(th), r * std::sin(th)});
  }
  const CellWeights W = cell_weights(disk, dx);
  for (int c2 = W.c2_min; c2 < W.c2_min + W.height; ++c2)
    for (int c1 = W.c1_min; c1 < W.c1_min + W.width; ++c1)
      f.at(wrap(c2 + G / 2, G), wrap(c1 + G / 2, G)) += W.at(c1, c2) / (dx * dx);
  return f;
}

std::vector<Weak11Row> weak11_probe(const GridField& f, const RectangleFamily& fam, const std::vector<double>& alphas,
                                    const MaximalOptions& opt) {
  const MaximalField M = nikodym_maximal(f, fam, opt);
  double l1 = 0.0;
  for (const auto& z : f.values()) l1 += std::abs(z);
  l1 *= f.spec().dx() * f.spec().dx();
  std::vector<Weak11Row> rows;
  for (double a : alphas) {
    if (!(a > 0.0)) fail(ErrorKind::Validation, "weak-type levels must be positive");
    Weak11Row r;
    r.alpha = a;
    r.measure = M.measure_above(4.0 * a);
    r.bound = fam.N * l1 / a;
    r.ratio = r.measure / r.bound;
    rows.push_back(r);
  }
  return rows;
}

MaximalReport maximal_growth(const std::vector<int>& Ns, const DilationGroup& group, const std::vector<int>& scales,
                             int eval_stride) {
  if (Ns.size() < 2) fail(ErrorKind::Configuration, "growth fit needs at least two values of N");
  MaximalReport rep;
  rep.Ns = Ns;
  rep.ids = {"bush", "ball"};
  rep.ratios.assign(2, {});
  const double lambda = 4.0;
  int max_scale = 0;
  for (int k : scales) max_scale = std::max(max_scale, k);
  for (int N : Ns) {
    const double reach = 4.0 * N * lambda * std::max(1.0, group.power(std::ldexp(1.0, max_scale)).max_abs());
    int G = 128;
    while (G < reach) G *= 2;
    const GridSpec spec{G, 0.5 * G, {}};
    RectangleFamily fam{lambda, N, scales, group};
    const MaximalOptions opt{eval_stride};
    const GridField members[2] = {kakeya_bush(spec, fam), ball_indicator(spec, lambda)};
    double best = 0.0;
    for (int m = 0; m < 2; ++m) {
      const double r = nikodym_maximal(members[m], fam, opt).l2() / members[m].norm_p(2.0);
      rep.ratios[m].push_back(r);
      best = std::max(best, r);
    }
    rep.max_ratio.push_back(best);
  }
  std::vector<double> xs, lx;
  for (int N : Ns) {
    xs.push_back(N);
    lx.push_back(std::log(3.0 * N));
  }
  rep.power_fit = fit_loglog(xs, rep.max_ratio);
  rep.polylog_fit = fit_loglog(lx, rep.max_ratio);
  return rep;
}

KernelMaximalResult kernel_maximal(const PartitionOfUnity& pou, const FrequencyGeometry& geom, const GridField& f,
                                   const KernelMaximalOptions& opt) {
  if (geom.proj.size() != geom.rho.size()) fail(ErrorKind::Validation, "kernel_maximal needs boundary projections");
  const Tiling& T = pou.tiling();
  const double delta = T.delta();
  const GridField fhat = to_frequency(f);
  const std::size_t n = fhat.spec().size();
  // Tiles whose symbol meets the spectrum, with the samples where both are nonzero.
  std::map<TileIndex, std::vector<std::pair<std::size_t, double>>> support;
  {
    std::vector<std::pair<TileIndex, double>> buf;
    const double floor = spectral_floor(fhat);
    for (std::size_t q = 0; q < n; ++q) {
      if (std::abs(fhat.values()[q]) <= floor) continue;
      pou.nonzero(geom.rho[q], geom.proj[q], opt.n_min, opt.n_max, buf);
      for (const auto& [t, s] : buf) support[t].push_back({q, s});
    }
  }
  struct Job {
    const std::vector<std::pair<std::size_t, double>>* samples;
    double t;
  };
  std::vector<Job> jobs;
  for (const auto& [tile, samples] : support) {
    double lo = 1e300, hi = 0.0;
    for (const auto& [q, s] : samples) {
      lo = std::min(lo, geom.rho[q]);
      hi = std::max(hi, geom.rho[q]);
    }
    const double t_lo = std::max(lo / (1.0 + delta), std::ldexp(1.0, tile.n - 10));
    const double t_hi = std::min(hi / (1.0 - delta), std::ldexp(1.0, tile.n + 10));
    if (t_hi < t_lo) continue;
    const LogGrid g{t_lo, t_hi, opt.t_step_factor * delta};
    for (double t : g.points()) jobs.push_back({&samples, t});
  }
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::vector<std::vector<double>> best(threads, std::vector<double>(n, 0.0));
#pragma omp parallel
  {
    int id = 0;
#ifdef _OPENMP
    id = omp_get_thread_num();
#endif
#pragma omp for schedule(dynamic, 1)
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      GridField work(fhat.spec(), Space::Frequency);
      bool any = false;
      for (const auto& [q, s] : *jobs[k].samples) {
        const double c = annulus_cutoff(delta, geom.rho[q], jobs[k].t);
        if (c == 0.0) continue;
        work.values()[q] = c * s * fhat.values()[q];
        any = true;
      }
      if (!any) continue;
      work.inverse();
      auto& b = best[id];
      for (std::size_t q = 0; q < n; ++q) b[q] = std::max(b[q], std::abs(work.values()[q]));
    }
  }
  KernelMaximalResult r;
  r.values = GridField(f.spec(), Space::Physical);
  for (std::size_t q = 0; q < n; ++q) {
    double m = 0.0;
    for (const auto& b : best) m = std::max(m, b[q]);
    r.values.values()[q] = m;
  }
  r.tiles = static_cast<int>(support.size());
  r.evaluations = static_cast<int>(jobs.size());
  return r;
}

}  // namespace qrad
