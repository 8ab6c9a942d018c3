#pragma once

#include <utility>
#include <vector>

#include "qrad/grid.hpp"
#include "qrad/tiling.hpp"

namespace qrad {

// phi_0(s) = phi(s/2) - phi(s), supported in (1/2, 2); sum_n phi_0(2^{-n} s) = 1.
double phi0(double s);
// phi(2^{-n-1} s) - phi(2^{-n} s).
double phi_n(int n, double s);

// Partition of unity sigma_{i,j,m,n} subordinate to the tiling:
//   sigma(xi) = phi_0(s) Psi_i(angle) psi_m(s) alpha_j(x_i) (1 - alpha_{j+1}(x_i)),
// s = rho((2^{-n})^A xi) = 2^{-n} rho(xi), angle the polar angle of the
// boundary projection and x_i its rotated abscissa.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(const Tiling& tiling, double alpha_margin = 0.01);

  const Tiling& tiling() const { return *tiling_; }
  double alpha_margin() const { return margin_; }
  int m_min() const { return m_min_; }
  int m_max() const { return m_max_; }

  // psi_m(s), normalized over m in [m_min, m_max]; sums to 1 on [1/2, 2].
  double psi(int m, double s) const;
  // Unnormalized translated bump b((log s - m log r) / (0.75 log r)).
  double psi_raw(int m, double s) const;
  // alpha_j for sector i: 0 left of i_j - w_j, 1 right of i_j; alpha_{Q'} = 0.
  double alpha(int i, int j, double x) const;
  double alpha_window(int i, int j, double x) const { return alpha(i, j, x) * (1.0 - alpha(i, j + 1, x)); }

  // Literal evaluation: applies (2^{-n})^A to xi first.
  double sigma(const TileIndex& t, Vec2 xi) const;
  // Evaluation from rho(xi) and the boundary projection.
  double sigma(const TileIndex& t, double rho, Vec2 proj) const;
  // All (index, value) with nonzero sigma, n in [n_min, n_max].
  void nonzero(double rho, Vec2 proj, int n_min, int n_max, std::vector<std::pair<TileIndex, double>>& out) const;
  double sum(double rho, Vec2 proj, int n_min, int n_max) const;

 private:
  const Tiling* tiling_;
  double margin_;
  double log_r_;
  int m_min_, m_max_;
  std::vector<std::vector<double>> widths_;  // w_j per sector
};

// Symbol of psi_t: xi -> Phi((rho(xi)/t - 1)/delta).
double annulus_cutoff(double delta, double rho, double t);

struct Kernel {
  TileIndex index;
  GridField values;  // physical samples of F^{-1}[sigma]
  double l1 = 0.0;
  double tail_fraction = 0.0;  // mass share in the border band
};

// Inverse transform of the symbol sampled on a frequency grid (centre taken
// from `grid`); throws a resolution error when the border band
// max(|x1|,|x2|) >= 7L/8 carries 1e-4 or more of the L1 mass.
Kernel kernel_from_symbol(const FrequencyGeometry& grid, const std::vector<double>& symbol, double tail_tol = 1e-4);
Kernel kernel_build(const PartitionOfUnity& pou, const TileIndex& t, const FrequencyGeometry& grid,
                    double tail_tol = 1e-4);

// Integral of |K| over 2^k <= |x| < 2^{k+1}.
double kernel_annulus_l1(const GridField& kernel, int k);

}  // namespace qrad
