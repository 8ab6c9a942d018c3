#include "qrad/family.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

GridField from_symbol(const GridSpec& spec, const std::vector<cplx>& fhat) {
  GridField F(spec, Space::Frequency);
  F.values() = fhat;
  F.inverse();
  return F;
}

Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? Vec2{v.x / n, v.y / n} : Vec2{};
}

}  // namespace

TestFunction random_phase_annulus(const FrequencyGeometry& geom, double delta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<cplx> fhat(geom.rho.size());
  for (std::size_t q = 0; q < fhat.size(); ++q) {
    const double sign = (rng() & 1u) ? 1.0 : -1.0;
    fhat[q] = sign * mother_bump((geom.rho[q] - 1.0) / delta);
  }
  return {"random-" + std::to_string(seed), from_symbol(geom.spec, fhat)};
}

TestFunction focusing_annulus(const FrequencyGeometry& geom, double delta) {
  std::vector<cplx> fhat(geom.rho.size());
  for (std::size_t q = 0; q < fhat.size(); ++q) fhat[q] = mother_bump((geom.rho[q] - 1.0) / delta);
  return {"focusing", from_symbol(geom.spec, fhat)};
}

TestFunction kakeya_sum(const FrequencyGeometry& geom, const PartitionOfUnity& pou, std::uint64_t seed) {
  if (geom.proj.size() != geom.rho.size()) fail(ErrorKind::Validation, "kakeya_sum needs boundary projections");
  const Tiling& T = pou.tiling();
  const double delta = T.delta();
  const ConvexDomain& dom = T.pair().domain();
  std::map<std::pair<int, int>, Vec2> shift;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < T.sectors().size(); ++i) {
    const auto& I = T.caps(i).refined;
    for (int j = 0; j < static_cast<int>(I.size()); ++j) {
      const Vec2 p = T.boundary_point(i, 0.5 * (I[j].lo + I[j].hi));
      const Vec2 nrm = normalized(dom.gauge_gradient(p));
      const double u = U(rng) / (4.0 * delta);
      shift[{i, j}] = Vec2{u * nrm.x, u * nrm.y};
    }
  }
  std::vector<cplx> fhat(geom.rho.size());
  const int N = geom.spec.N;
#pragma omp parallel
  {
    std::vector<std::pair<TileIndex, double>> buf;
#pragma omp for schedule(dynamic, 8)
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) {
        const std::size_t q = static_cast<std::size_t>(a) * N + b;
        const double rho = geom.rho[q];
        if (std::fabs(rho - 1.0) > 4.0 * delta) continue;
        pou.nonzero(rho, geom.proj[q], 0, 0, buf);
        const Vec2 xi = geom.spec.xi_at(a, b);
        cplx v{};
        for (const auto& [t, s] : buf) {
          if (t.m != 0) continue;
          const Vec2 x0 = shift.at({t.i, t.j});
          v += s * std::polar(1.0, -dot(x0, xi));
        }
        fhat[q] = v;
      }
    }
  }
  return {"kakeya-" + std::to_string(seed), from_symbol(geom.spec, fhat)};
}

TestFunction sector_patch(const FrequencyGeometry& geom, const SectorSystem& sectors, double delta, std::uint64_t seed) {
  if (geom.proj.size() != geom.rho.size()) fail(ErrorKind::Validation, "sector_patch needs boundary projections");
  const int s = sectors.sector_of(0.5 * std::numbers::pi);
  std::mt19937_64 rng(seed);
  std::vector<cplx> fhat(geom.rho.size());
  for (std::size_t q = 0; q < fhat.size(); ++q) {
    const double sign = seed == 0 || (rng() & 1u) ? 1.0 : -1.0;
    const double r = mother_bump((geom.rho[q] - 1.0) / delta);
    if (r != 0.0) fhat[q] = sign * r * sectors.Psi(s, arg(geom.proj[q]));
  }
  return {seed == 0 ? std::string("patch-focusing") : "patch-" + std::to_string(seed), from_symbol(geom.spec, fhat)};
}

std::vector<TestFunction> patch_family(const CompatiblePair& pair, const FrequencyGeometry& geom,
                                       const SectorSystem& sectors, double delta, std::uint64_t seed) {
  std::vector<TestFunction> out;
  out.push_back(sector_patch(geom, sectors, delta, seed));
  out.push_back(sector_patch(geom, sectors, delta, seed + 1));
  out.push_back(sector_patch(geom, sectors, delta, 0));
  const Vec2 top = pair.domain().boundary_point(0.5 * std::numbers::pi);
  out.push_back(modulated_gaussian(geom.spec, std::min(1.0 / (delta * norm(top)), geom.spec.L / 8.0), top));
  return out;
}

TestFunction modulated_gaussian(const GridSpec& spec, double width, Vec2 xi0) {
  GridField f(spec);
  for (int a = 0; a < spec.N; ++a)
    for (int b = 0; b < spec.N; ++b) {
      const Vec2 x = spec.x_at(a, b);
      f.at(a, b) = std::exp(-0.5 * dot(x, x) / (width * width)) * std::polar(1.0, dot(xi0, x));
    }
  return {"gaussian", std::move(f)};
}

TestFunction radial_bump(const FrequencyGeometry& geom, double halfwidth) {
  std::vector<cplx> fhat(geom.rho.size());
  for (std::size_t q = 0; q < fhat.size(); ++q) fhat[q] = plateau_bump((geom.rho[q] - 1.0) / halfwidth);
  return {"radial", from_symbol(geom.spec, fhat)};
}

std::vector<TestFunction> build_family(const FamilySpec& spec, const CompatiblePair& pair, const FrequencyGeometry& geom,
                                       double delta, const PartitionOfUnity* pou) {
  std::vector<TestFunction> out;
  const bool all = spec.name == "std";
  if (!all && spec.name != "gaussian" && spec.name != "random" && spec.name != "focusing")
    fail(ErrorKind::Configuration, "unknown test-function family '" + spec.name + "'");
  if (all || spec.name == "random")
    for (int k = 0; k < spec.random_members; ++k) out.push_back(random_phase_annulus(geom, delta, spec.seed + k));
  if (all || spec.name == "focusing") {
    out.push_back(focusing_annulus(geom, delta));
    if (pou) out.push_back(kakeya_sum(geom, *pou, spec.seed));
  }
  if (all || spec.name == "gaussian") {
    // Spectral width comparable to the annulus width at the top boundary point.
    const Vec2 top = pair.domain().boundary_point(0.5 * std::numbers::pi);
    out.push_back(modulated_gaussian(geom.spec, std::min(1.0 / (delta * norm(top)), geom.spec.L / 8.0), top));
  }
  return out;
}

ScalingReport delta_scaling_experiment(const CompatiblePair& pair, const std::vector<double>& deltas,
                                       const FamilySpec& family, const GridSpec& grid, bool refinement_check) {
  if (deltas.empty()) fail(ErrorKind::Configuration, "delta list is empty");
  ScalingReport rep;
  rep.deltas = deltas;
  const FrequencyGeometry geom = frequency_geometry(pair, grid, true);
  const auto sectors = build_sectors(pair);
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 0.25)) fail(ErrorKind::Domain, "delta must lie in (0, 1/4)");
    const Tiling T(sectors, delta, 0, 0);
    const PartitionOfUnity pou(T);
    const auto members = build_family(family, pair, geom, delta, &pou);
    if (members.empty()) fail(ErrorKind::Configuration, "test-function family is empty");
    double best = -1.0;
    std::string best_id;
    const GridField* best_f = nullptr;
    for (const auto& m : members) {
      const GridField fhat = to_frequency(m.f);
      const LogGrid tg = annulus_t_grid(geom, fhat, delta);
      const GridField S = square_function_annulus(geom, m.f, delta, tg);
      const double ratio = S.norm_p(4.0) / m.f.norm_p(4.0);
      rep.rows.push_back({delta, m.id, ratio, static_cast<int>(tg.points().size())});
      if (ratio > best) {
        best = ratio;
        best_id = m.id;
        best_f = &m.f;
      }
    }
    rep.max_ratio.push_back(best);
    rep.argmax.push_back(best_id);
    if (refinement_check) {
      const GridField fhat = to_frequency(*best_f);
      LogGrid tg = annulus_t_grid(geom, fhat, delta, 1.0 / 16.0);
      const double fine = square_function_annulus(geom, *best_f, delta, tg).norm_p(4.0) / best_f->norm_p(4.0);
      rep.refinement_change.push_back(std::fabs(fine - best) / best);
    }
  }
  if (deltas.size() >= 2) rep.fit = fit_loglog(deltas, rep.max_ratio);
  return rep;
}

LogGrid glambda_t_grid(const FrequencyGeometry& geom, const GridField& fhat, double step_scale) {
  double lo = 0.0, hi = 0.0;
  spectral_rho_range(geom, fhat, lo, hi);
  double amax = 0.0, xmax = 0.0;
  for (const auto& z : fhat.values()) amax = std::max(amax, std::abs(z));
  const int N = geom.spec.N;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      if (std::abs(fhat.at(a, b)) > 1e-12 * amax) xmax = std::max(xmax, norm(geom.spec.xi_at(a, b)));
  if (!(lo > 0.0) || !(xmax > 0.0)) fail(ErrorKind::Configuration, "spectrum must avoid the origin");
  LogGrid g;
  g.t_min = lo;
  g.t_max = 2.0 * hi;
  g.step = step_scale * geom.spec.dxi() / xmax;
  return g;
}

std::vector<GlambdaRow> glambda_refinement_probe(const CompatiblePair& pair, const std::vector<double>& lambdas,
                                                 const std::vector<GridSpec>& grids, double step_scale,
                                                 bool gaussian_member) {
  std::vector<GlambdaRow> rows;
  const Vec2 top = pair.domain().boundary_point(0.5 * std::numbers::pi);
  for (const GridSpec& spec : grids) {
    const FrequencyGeometry geom = frequency_geometry(pair, spec, false);
    std::vector<TestFunction> members{radial_bump(geom, 0.25)};
    if (gaussian_member) members.push_back(modulated_gaussian(spec, 2.0, top));
    for (const auto& m : members) {
      const GridField fhat = to_frequency(m.f);
      const LogGrid tg = glambda_t_grid(geom, fhat, step_scale);
      const double fn = m.f.norm_p(4.0);
      for (double lambda : lambdas) {
        const GridField G = square_function_glambda(geom, m.f, lambda, tg);
        rows.push_back({spec.N, spec.L, lambda, m.id, G.norm_p(4.0) / fn, static_cast<int>(tg.points().size())});
      }
    }
  }
  return rows;
}

}  // namespace qrad
