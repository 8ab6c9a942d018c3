#include "qrad/bumps.hpp"

#include <algorithm>
#include <cmath>

#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

// Support half-width of psi_m in units of log r.
constexpr double kPsiSpread = 0.75;

}  // namespace

double phi0(double s) { return plateau_bump(0.5 * s) - plateau_bump(s); }

double phi_n(int n, double s) { return phi0(std::ldexp(s, -n)); }

PartitionOfUnity::PartitionOfUnity(const Tiling& tiling, double alpha_margin)
    : tiling_(&tiling), margin_(alpha_margin), log_r_(std::log(tiling.ratio())) {
  if (!(alpha_margin > 0.0 && alpha_margin <= 1.0)) fail(ErrorKind::Validation, "alpha margin must lie in (0, 1]");
  // Every m whose bump meets [1/2, 2].
  m_min_ = static_cast<int>(std::floor(std::log(0.5) / log_r_ - kPsiSpread));
  m_max_ = static_cast<int>(std::ceil(std::log(2.0) / log_r_ + kPsiSpread));
  const int K = tiling.sectors().size();
  widths_.resize(K);
  for (int i = 0; i < K; ++i) {
    const auto& I = tiling.caps(i).refined;
    widths_[i].resize(I.size());
    for (std::size_t j = 0; j < I.size(); ++j) {
      const double len = j == 0 ? I[0].length() : std::min(I[j - 1].length(), I[j].length());
      widths_[i][j] = margin_ * len;
    }
  }
}

double PartitionOfUnity::psi_raw(int m, double s) const {
  if (!(s > 0.0)) return 0.0;
  return plateau_bump((std::log(s) - m * log_r_) / (kPsiSpread * log_r_));
}

double PartitionOfUnity::psi(int m, double s) const {
  if (m < m_min_ || m > m_max_) return 0.0;
  const double own = psi_raw(m, s);
  if (own == 0.0) return 0.0;
  const int c = static_cast<int>(std::lround(std::log(s) / log_r_));
  double total = 0.0;
  for (int k = std::max(m_min_, c - 2); k <= std::min(m_max_, c + 2); ++k) total += psi_raw(k, s);
  return own / total;
}

double PartitionOfUnity::alpha(int i, int j, double x) const {
  const auto& I = tiling_->caps(i).refined;
  if (j >= static_cast<int>(I.size())) return 0.0;
  return smooth_step((x - I[j].lo) / widths_[i][j] + 1.0);
}

double PartitionOfUnity::sigma(const TileIndex& t, Vec2 xi) const {
  const CompatiblePair& pair = tiling_->pair();
  const Vec2 base = pair.group().power(std::ldexp(1.0, -t.n)) * xi;
  double rho;
  Vec2 proj;
  pair.rho_and_project(base, rho, proj);
  return sigma({t.i, t.j, t.m, 0}, rho, proj);
}

double PartitionOfUnity::sigma(const TileIndex& t, double rho, Vec2 proj) const {
  const double s = std::ldexp(rho, -t.n);
  const double f = phi0(s);
  if (f == 0.0) return 0.0;
  const double P = tiling_->sectors().Psi(t.i, arg(proj));
  if (P == 0.0) return 0.0;
  const double p = psi(t.m, s);
  if (p == 0.0) return 0.0;
  const double x = tiling_->sectors().x_coord(t.i, proj);
  return f * P * p * alpha_window(t.i, t.j, x);
}

void PartitionOfUnity::nonzero(double rho, Vec2 proj, int n_min, int n_max,
                               std::vector<std::pair<TileIndex, double>>& out) const {
  out.clear();
  if (!(rho > 0.0)) return;
  const SectorSystem& S = tiling_->sectors();
  const int K = S.size();
  const double angle = arg(proj);
  const int s0 = S.sector_of(angle);
  int secs[3] = {(s0 + K - 1) % K, s0, (s0 + 1) % K};
  const int nsec = K >= 3 ? 3 : K;
  for (int n = n_min; n <= n_max; ++n) {
    const double s = std::ldexp(rho, -n);
    const double f = phi0(s);
    if (f == 0.0) continue;
    for (int q = 0; q < nsec; ++q) {
      const int i = K >= 3 ? secs[q] : q;
      const double P = S.Psi(i, angle);
      if (P == 0.0) continue;
      const double x = S.x_coord(i, proj);
      const auto& caps = tiling_->caps(i);
      const int j0 = caps.locate(x);
      const int c = static_cast<int>(std::lround(std::log(s) / log_r_));
      for (int m = c - 2; m <= c + 2; ++m) {
        const double p = psi(m, s);
        if (p == 0.0) continue;
        for (int j = std::max(0, j0 - 1); j <= std::min(caps.Qprime - 1, j0 + 1); ++j) {
          const double a = alpha_window(i, j, x);
          if (a != 0.0) out.push_back({{i, j, m, n}, f * P * p * a});
        }
      }
    }
  }
}

double PartitionOfUnity::sum(double rho, Vec2 proj, int n_min, int n_max) const {
  thread_local std::vector<std::pair<TileIndex, double>> buf;
  nonzero(rho, proj, n_min, n_max, buf);
  double s = 0.0;
  for (const auto& e : buf) s += e.second;
  return s;
}

double annulus_cutoff(double delta, double rho, double t) { return mother_bump((rho / t - 1.0) / delta); }

Kernel kernel_from_symbol(const FrequencyGeometry& grid, const std::vector<double>& symbol, double tail_tol) {
  if (symbol.size() != grid.spec.size()) fail(ErrorKind::Validation, "symbol size does not match the grid");
  GridField F(grid.spec, Space::Frequency);
  for (std::size_t q = 0; q < symbol.size(); ++q) F.values()[q] = symbol[q];
  F.inverse();
  Kernel k;
  k.values = std::move(F);
  const GridSpec& s = grid.spec;
  const double band = 0.875 * s.L, area = s.dx() * s.dx();
  double total = 0.0, tail = 0.0;
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) {
      const Vec2 x = s.x_at(a, b);
      const double v = std::abs(k.values.at(a, b)) * area;
      total += v;
      if (std::max(std::fabs(x.x), std::fabs(x.y)) >= band) tail += v;
    }
  k.l1 = total;
  k.tail_fraction = total > 0.0 ? tail / total : 0.0;
  if (k.tail_fraction >= tail_tol)
    fail(ErrorKind::Resolution, "kernel mass near the window border is " + std::to_string(k.tail_fraction) +
                                    " of its L1 norm; enlarge L beyond " + std::to_string(s.L));
  return k;
}

Kernel kernel_build(const PartitionOfUnity& pou, const TileIndex& t, const FrequencyGeometry& grid, double tail_tol) {
  if (grid.proj.size() != grid.rho.size()) fail(ErrorKind::Validation, "kernel_build needs boundary projections");
  std::vector<double> sym(grid.rho.size());
  for (std::size_t q = 0; q < sym.size(); ++q) sym[q] = pou.sigma(t, grid.rho[q], grid.proj[q]);
  Kernel k = kernel_from_symbol(grid, sym, tail_tol);
  k.index = t;
  return k;
}

double kernel_annulus_l1(const GridField& kernel, int k) {
  const GridSpec& s = kernel.spec();
  const double r0 = std::ldexp(1.0, k), r1 = std::ldexp(1.0, k + 1);
  if (r1 > s.L) fail(ErrorKind::Resolution, "annulus radius 2^" + std::to_string(k + 1) + " exceeds the window");
  const double area = s.dx() * s.dx();
  double total = 0.0;
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) {
      const double r = norm(s.x_at(a, b));
      if (r >= r0 && r < r1) total += std::abs(kernel.at(a, b)) * area;
    }
  return total;
}

}  // namespace qrad
