#include "qrad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qrad/errors.hpp"
#include "qrad/lwp.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

std::vector<CoverageRow> coverage_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, int samples) {
  const auto sectors = build_sectors(pair);
  std::vector<CoverageRow> rows;
  for (double d : deltas) {
    const Tiling T(sectors, d, -1, 1);
    const OverlapReport rep = tile_multiplicity(T, samples);
    CoverageRow r;
    r.delta = d;
    r.max_overlap = rep.max_overlap;
    for (const auto& [c, n] : rep.histogram) {
      r.samples += n;
      if (c == 0) r.uncovered += n;
    }
    r.N_delta = T.N_delta();
    r.Nprime_delta = T.Nprime_delta();
    rows.push_back(r);
  }
  return rows;
}

OverlapSweep overlap_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, double ball_exponent,
                           bool with_ball) {
  const auto sectors = build_sectors(pair);
  OverlapSweep out;
  std::vector<double> counts;
  for (double d : deltas) {
    const Tiling T(sectors, d, -1, 1);
    OverlapRow r;
    r.delta = d;
    const OverlapReport s = count_sum_overlaps(T, 1.0, 1.0);
    r.sum_max = s.max_overlap;
    r.sum_family = s.family_size;
    if (with_ball) r.ball_max = count_ball_sum_overlaps(T, 1.0, std::pow(d, -ball_exponent)).max_overlap;
    out.rows.push_back(r);
    counts.push_back(r.sum_max);
  }
  if (deltas.size() >= 2) out.sum_fit = fit_log_squared(deltas, counts);
  return out;
}

std::vector<ActiveTimeRow> active_time_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, int tiles,
                                             std::uint64_t seed) {
  const auto sectors = build_sectors(pair);
  std::vector<ActiveTimeRow> rows;
  for (double d : deltas) {
    const Tiling T(sectors, d, 0, 0);
    std::mt19937_64 rng(seed);
    ActiveTimeRow r;
    r.delta = d;
    r.tiles = tiles;
    double sum = 0.0;
    for (int k = 0; k < tiles; ++k) {
      const int i = static_cast<int>(rng() % T.sectors().size());
      const int j = static_cast<int>(rng() % T.caps(i).Qprime);
      const int span = T.Nprime_delta() - T.N_delta() + 1;
      const int m = T.N_delta() + static_cast<int>(rng() % span);
      const double v = active_time_measure(T, {i, j, m, 0}, 0.25, 4.0) / d;
      r.max_ratio = std::max(r.max_ratio, v);
      sum += v;
    }
    r.mean_ratio = tiles > 0 ? sum / tiles : 0.0;
    rows.push_back(r);
  }
  return rows;
}

double AnnulusKernelTable::min_inner_ratio(int skip) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q + 1 < ks.size(); ++q)
    if (ks[q + 1] < l - skip) best = std::min(best, values[q + 1] / values[q]);
  return best;
}

double AnnulusKernelTable::min_outer_ratio(int skip) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t q = 1; q < ks.size(); ++q)
    if (ks[q - 1] > l + skip) best = std::min(best, values[q - 1] / values[q]);
  return best;
}

AnnulusKernelTable annulus_kernel_table(const CompatiblePair& pair, int l, const GridSpec& spec, int k_min, int k_max) {
  if (k_min > k_max) fail(ErrorKind::Configuration, "empty annulus range");
  const FrequencyGeometry geom = frequency_geometry(pair, spec, false);
  std::vector<double> sym(geom.rho.size());
  const double scale = std::ldexp(1.0, l);
  for (std::size_t q = 0; q < sym.size(); ++q) sym[q] = mother_bump(scale * (1.0 - geom.rho[q]));
  const Kernel K = kernel_from_symbol(geom, sym);
  AnnulusKernelTable t;
  t.l = l;
  t.spec = spec;
  t.l1 = K.l1;
  t.tail_fraction = K.tail_fraction;
  for (int k = k_min; k <= k_max; ++k) {
    t.ks.push_back(k);
    t.values.push_back(kernel_annulus_l1(K.values, k));
  }
  return t;
}

std::vector<TileKernelRow> tile_kernel_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, int N) {
  const auto sectors = build_sectors(pair);
  std::vector<TileKernelRow> rows;
  for (double d : deltas) {
    const Tiling T(sectors, d, 0, 0);
    const PartitionOfUnity pou(T);
    TileKernelRow r;
    r.delta = d;
    r.tile = {0, T.caps(0).locate(0.0), 0, 0};
    // Bounding box of the symbol support: rho in the psi_0 support, x_0 over the cap window.
    const auto& I = T.caps(0).refined[r.tile.j];
    const double w = pou.alpha_margin() * I.length();
    const double r0 = std::pow(T.ratio(), -0.75), r1 = std::pow(T.ratio(), 0.75);
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (int a = 0; a <= 8; ++a) {
      const Vec2 b = T.boundary_point(0, I.lo - 2.0 * w + a * (I.length() + 2.0 * w) / 8.0);
      for (double s : {r0, r1}) {
        x_lo = std::min(x_lo, s * b.x);
        x_hi = std::max(x_hi, s * b.x);
        y_lo = std::min(y_lo, s * b.y);
        y_hi = std::max(y_hi, s * b.y);
      }
    }
    const double half = 0.5 * std::max(x_hi - x_lo, y_hi - y_lo);
    // Frequency half-range pi N / (2 L) equal to twice the support half-width.
    r.spec = GridSpec{N, std::numbers::pi * N / (4.0 * half), {0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)}};
    try {
      const FrequencyGeometry geom = frequency_geometry(pair, r.spec, true);
      const Kernel K = kernel_build(pou, r.tile, geom);
      r.resolved = true;
      r.l1 = K.l1;
      r.constant = K.l1 / std::log(1.0 / d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Resolution) throw;
      r.error = e.what();
    }
    rows.push_back(r);
  }
  return rows;
}

namespace {

template <class Eval>
DeltaProbe delta_probe(const CompatiblePair& pair, const std::vector<double>& deltas, const GridSpec& spec,
                       std::uint64_t seed, Eval eval) {
  const FrequencyGeometry geom = frequency_geometry(pair, spec, true);
  const auto sectors = build_sectors(pair);
  DeltaProbe out;
  out.deltas = deltas;
  for (double d : deltas) {
    const Tiling T(sectors, d, 0, 0);
    const PartitionOfUnity pou(T);
    double best = 0.0;
    for (const auto& m : patch_family(pair, geom, *sectors, d, seed)) {
      ProbeRow r = eval(pou, geom, m.f);
      r.delta = d;
      r.id = m.id;
      best = std::max(best, r.ratio);
      out.rows.push_back(r);
    }
    out.max_ratio.push_back(best);
  }
  if (deltas.size() >= 2) out.fit = fit_loglog(deltas, out.max_ratio);
  return out;
}

}  // namespace

DeltaProbe kernel_maximal_probe(const CompatiblePair& pair, const std::vector<double>& deltas, const GridSpec& spec,
                                std::uint64_t seed) {
  return delta_probe(pair, deltas, spec, seed, [](const PartitionOfUnity& pou, const FrequencyGeometry& geom,
                                                  const GridField& f) {
    KernelMaximalOptions opt;
    opt.n_min = -1;
    opt.n_max = 1;
    const KernelMaximalResult res = kernel_maximal(pou, geom, f, opt);
    ProbeRow r;
    r.ratio = res.values.norm_p(2.0) / f.norm_p(2.0);
    r.tiles = res.tiles;
    r.evaluations = res.evaluations;
    return r;
  });
}

DeltaProbe tile_projection_probe(const CompatiblePair& pair, const std::vector<double>& deltas, const GridSpec& spec,
                                 std::uint64_t seed) {
  return delta_probe(pair, deltas, spec, seed, [](const PartitionOfUnity& pou, const FrequencyGeometry& geom,
                                                  const GridField& f) {
    const ProjectionFamily fam(pou);
    ProbeRow r;
    const GridField S = tile_projection_square_function(fam, geom, f, -1, 1, &r.tiles);
    r.ratio = S.norm_p(4.0) / f.norm_p(4.0);
    r.evaluations = r.tiles;
    return r;
  });
}

std::vector<DyadicRow> dyadic_projection_probe(const CompatiblePair& pair, const std::vector<int>& Ns, double dx) {
  std::vector<DyadicRow> rows;
  const Vec2 top = pair.domain().boundary_point(0.5 * std::numbers::pi);
  for (int N : Ns) {
    const GridSpec spec{N, 0.5 * N * dx, {}};
    const FrequencyGeometry geom = frequency_geometry(pair, spec, false);
    for (const auto& m : {radial_bump(geom, 0.25), modulated_gaussian(spec, 2.0, top)}) {
      const GridField S = dyadic_projection_square_function(geom, m.f);
      rows.push_back({N, spec.L, m.id, S.norm_p(4.0) / m.f.norm_p(4.0)});
    }
  }
  return rows;
}

MultiplierProbe multiplier_probe(double alpha, double riesz_lambda, const std::vector<double>& t_grid) {
  MultiplierProbe p;
  p.alpha = alpha;
  p.t_grid = t_grid;
  p.riesz_lambda = riesz_lambda;
  p.one = hormander_sobolev_norm([](double) { return 1.0; }, alpha, t_grid);
  p.riesz = hormander_sobolev_norm(
      [riesz_lambda](double s) { return s < 1.0 ? std::pow(1.0 - s, riesz_lambda) : 0.0; }, alpha, t_grid);
  p.bump = hormander_sobolev_norm([](double s) { return std::exp(-(s - 1.0) * (s - 1.0)); }, alpha, t_grid);
  if (!p.one.per_t.empty()) {
    const auto [lo, hi] = std::minmax_element(p.one.per_t.begin(), p.one.per_t.end());
    p.one_spread = *hi - *lo;
  }
  return p;
}

}  // namespace qrad
