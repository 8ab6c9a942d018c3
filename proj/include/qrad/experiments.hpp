#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrad/family.hpp"
#include "qrad/fit.hpp"
#include "qrad/maximal.hpp"
#include "qrad/multiplier_norm.hpp"
#include "qrad/tiling.hpp"

namespace qrad {

struct CoverageRow {
  double delta = 0.0;
  int max_overlap = 0;
  std::int64_t uncovered = 0;  // samples of 1/2 <= rho <= 2 in no tile
  std::int64_t samples = 0;
  int N_delta = 0, Nprime_delta = 0;
};
// Plain tile multiplicity on a samples x samples grid, n in [-1, 1].
std::vector<CoverageRow> coverage_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, int samples);

struct OverlapRow {
  double delta = 0.0;
  int sum_max = 0;  // A + B, A in A_1, B in A_1
  int sum_family = 0;
  int ball_max = 0;  // A + B_rho(0, 2/t), t = delta^{-ball_exponent}
};
struct OverlapSweep {
  std::vector<OverlapRow> rows;
  LinearFit sum_fit;  // sum_max against (log 1/delta)^2
};
OverlapSweep overlap_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, double ball_exponent = 8.0,
                           bool with_ball = true);

struct ActiveTimeRow {
  double delta = 0.0;
  int tiles = 0;
  double max_ratio = 0.0;  // max measure / delta
  double mean_ratio = 0.0;
};
// Random tiles (i, j, m, 0) drawn with the seed; t scanned over [1/4, 4].
std::vector<ActiveTimeRow> active_time_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, int tiles,
                                             std::uint64_t seed);

struct AnnulusKernelTable {
  int l = 0;
  GridSpec spec;
  std::vector<int> ks;
  std::vector<double> values;  // int over 2^k <= |x| < 2^{k+1} of |K|
  double l1 = 0.0;
  double tail_fraction = 0.0;
  // Smallest step ratio on each side beyond |k - l| = skip.
  double min_inner_ratio(int skip) const;
  double min_outer_ratio(int skip) const;
};
// Kernel of h_l(rho), h_l(s) = Phi(2^l (1 - s)), over the annuli k in [k_min, k_max].
AnnulusKernelTable annulus_kernel_table(const CompatiblePair& pair, int l, const GridSpec& spec, int k_min, int k_max);

struct TileKernelRow {
  double delta = 0.0;
  TileIndex tile;
  GridSpec spec;
  bool resolved = false;
  std::string error;  // resolution error text when unresolved
  double l1 = 0.0;
  double constant = 0.0;  // l1 / log(1/delta)
};
// Kernel of the central tile (0, locate(0), 0, 0) on an N x N grid centred on
// its frequency support, with the window chosen from the support size.
std::vector<TileKernelRow> tile_kernel_sweep(const CompatiblePair& pair, const std::vector<double>& deltas, int N);

struct ProbeRow {
  double delta = 0.0;
  std::string id;
  double ratio = 0.0;
  int tiles = 0;
  int evaluations = 0;
};
struct DeltaProbe {
  std::vector<ProbeRow> rows;
  std::vector<double> deltas;
  std::vector<double> max_ratio;
  LinearFit fit;  // log max_ratio against log delta; the exponent in 1/delta is -slope
  double exponent() const { return -fit.slope; }
};
// ||M-bar f||_2 / ||f||_2 over the patch family, n in [-1, 1].
DeltaProbe kernel_maximal_probe(const CompatiblePair& pair, const std::vector<double>& deltas, const GridSpec& spec,
                                std::uint64_t seed);
// ||(sum |P~ f|^2)^{1/2}||_4 / ||f||_4 over the patch family, n in [-1, 1].
DeltaProbe tile_projection_probe(const CompatiblePair& pair, const std::vector<double>& deltas, const GridSpec& spec,
                                 std::uint64_t seed);

struct DyadicRow {
  int N = 0;
  double L = 0.0;
  std::string id;
  double ratio = 0.0;
};
// ||(sum_n |P_n f|^2)^{1/2}||_4 / ||f||_4 for the radial bump and the
// modulated Gaussian at the top boundary point, on grids (N, N dx / 2).
std::vector<DyadicRow> dyadic_projection_probe(const CompatiblePair& pair, const std::vector<int>& Ns, double dx);

struct MultiplierProbe {
  double alpha = 0.0;
  std::vector<double> t_grid;
  SobolevNormResult one;  // m = 1
  SobolevNormResult riesz;  // m(s) = (1 - s)_+^lambda
  SobolevNormResult bump;  // m(s) = exp(-(s - 1)^2)
  double riesz_lambda = 0.0;
  double one_spread = 0.0;  // max - min over t of the m = 1 values
};
MultiplierProbe multiplier_probe(double alpha, double riesz_lambda, const std::vector<double>& t_grid);

}  // namespace qrad
