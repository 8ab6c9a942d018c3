#include "qrad/lwp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

// Plateau of psi_m in units of log r, and the enlarged support.
constexpr double kPsiSupport = 0.75;
constexpr double kEnlarged = 1.5;

GridField accumulate_projections(const GridField& fhat, const std::vector<std::vector<std::pair<std::size_t, double>>>& parts) {
  const std::size_t n = fhat.spec().size();
  std::vector<double> acc(n, 0.0);
  for (const auto& part : parts) {
    GridField g(fhat.spec(), Space::Frequency);
    for (const auto& [q, s] : part) g.values()[q] = s * fhat.values()[q];
    g.inverse();
    for (std::size_t q = 0; q < n; ++q) acc[q] += std::norm(g.values()[q]);
  }
  GridField out(fhat.spec(), Space::Physical);
  for (std::size_t q = 0; q < n; ++q) out.values()[q] = std::sqrt(acc[q]);
  return out;
}

}  // namespace

ProjectionFamily::ProjectionFamily(const PartitionOfUnity& pou) : pou_(&pou), log_r_(std::log(pou.tiling().ratio())) {
  const Tiling& T = pou.tiling();
  const SectorSystem& S = T.sectors();
  const ConvexDomain& dom = T.pair().domain();
  const int K = S.size();
  active_.resize(K);
  for (int i = 0; i < K; ++i) {
    // supp Psi_i lies between the neighbouring plateaus.
    const double a0 = S[(i + K - 1) % K].plateau_end, a1 = S[(i + 1) % K].plateau_start;
    const double x0 = S.x_coord(i, dom.boundary_point(a0)), x1 = S.x_coord(i, dom.boundary_point(a1));
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    const auto& I = T.caps(i).refined;
    int first = -1, last = -2;
    for (int j = 0; j < static_cast<int>(I.size()); ++j) {
      const double cl = I[j].lo - pou.alpha_margin() * I[j].length();
      if (cl < hi && I[j].hi > lo) {
        if (first < 0) first = j;
        last = j;
      }
    }
    active_[i] = {first, last};
  }
}

bool ProjectionFamily::active(const TileIndex& t) const {
  return t.i >= 0 && t.i < static_cast<int>(active_.size()) && t.j >= active_[t.i].first &&
         t.j <= active_[t.i].second && t.m >= pou_->m_min() && t.m <= pou_->m_max();
}

double ProjectionFamily::phi(const TileIndex& t, double rho, Vec2 proj) const {
  if (!active(t)) return 0.0;
  const Tiling& T = pou_->tiling();
  const double s = std::ldexp(rho, -t.n);
  if (!(s > 0.0)) return 0.0;
  const double u = std::fabs(std::log(s) / log_r_ - t.m);
  const double radial = smooth_step((kEnlarged - u) / (kEnlarged - kPsiSupport));
  if (radial == 0.0) return 0.0;
  const Vec2 q = T.sectors()[t.i].rot * proj;
  if (!(q.y > 0.0)) return 0.0;
  const auto& I = T.caps(t.i).refined;
  const double len = I[t.j].length();
  // The window alpha_j (1 - alpha_{j+1}) vanishes outside (lo_j - w_j, hi_j), w_j <= margin |I_j|.
  const double lo = I[t.j].lo - pou_->alpha_margin() * len, hi = I[t.j].hi;
  const double e = 0.5 * len;
  return radial * smooth_step((q.x - (lo - e)) / e) * smooth_step((hi + e - q.x) / e);
}

void ProjectionFamily::nonzero(double rho, Vec2 proj, int n_min, int n_max,
                               std::vector<std::pair<TileIndex, double>>& out) const {
  out.clear();
  if (!(rho > 0.0)) return;
  const Tiling& T = pou_->tiling();
  const SectorSystem& S = T.sectors();
  for (int i = 0; i < S.size(); ++i) {
    const Vec2 q = S[i].rot * proj;
    if (!(q.y > 0.0)) continue;
    for (int n = n_min; n <= n_max; ++n) {
      const double s = std::ldexp(rho, -n);
      const int c = static_cast<int>(std::lround(std::log(s) / log_r_));
      for (int m = std::max(c - 2, pou_->m_min()); m <= std::min(c + 2, pou_->m_max()); ++m)
        for (int j = active_[i].first; j <= active_[i].second; ++j) {
          const double v = phi({i, j, m, n}, rho, proj);
          if (v != 0.0) out.push_back({{i, j, m, n}, v});
        }
    }
  }
}

GridField tile_projection_square_function(const ProjectionFamily& fam, const FrequencyGeometry& geom,
                                          const GridField& f, int n_min, int n_max, int* tiles_used) {
  if (geom.proj.size() != geom.rho.size()) fail(ErrorKind::Validation, "tile projections need boundary projections");
  const GridField fhat = to_frequency(f);
  std::map<TileIndex, std::vector<std::pair<std::size_t, double>>> parts;
  std::vector<std::pair<TileIndex, double>> buf;
  const double floor = spectral_floor(fhat);
  for (std::size_t q = 0; q < fhat.values().size(); ++q) {
    if (std::abs(fhat.values()[q]) <= floor) continue;
    fam.nonzero(geom.rho[q], geom.proj[q], n_min, n_max, buf);
    for (const auto& [t, v] : buf) parts[t].push_back({q, v});
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> list;
  for (auto& [t, p] : parts) list.push_back(std::move(p));
  if (tiles_used) *tiles_used = static_cast<int>(list.size());
  return accumulate_projections(fhat, list);
}

double dyadic_cutoff(double s) {
  if (!(s > 0.0)) return 0.0;
  return smooth_step(2.0 - std::fabs(std::log2(s)));
}

GridField dyadic_projection_square_function(const FrequencyGeometry& geom, const GridField& f) {
  const GridField fhat = to_frequency(f);
  std::map<int, std::vector<std::pair<std::size_t, double>>> parts;
  const double floor = spectral_floor(fhat);
  for (std::size_t q = 0; q < fhat.values().size(); ++q) {
    if (std::abs(fhat.values()[q]) <= floor || !(geom.rho[q] > 0.0)) continue;
    const int c = static_cast<int>(std::floor(std::log2(geom.rho[q])));
    for (int n = c - 2; n <= c + 3; ++n) {
      const double v = dyadic_cutoff(std::ldexp(geom.rho[q], -n));
      if (v != 0.0) parts[n].push_back({q, v});
    }
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> list;
  for (auto& [n, p] : parts) list.push_back(std::move(p));
  return accumulate_projections(fhat, list);
}

}  // namespace qrad
