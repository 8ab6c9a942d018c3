#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qrad/quasinorm.hpp"

namespace qrad {

using cplx = std::complex<double>;

enum class Space { Physical, Frequency };

// Periodic N x N grid over [-L, L)^2: x = -L + (b, a) 2L/N for row a, column b.
// Frequencies are centre + (k1, k2) pi/L with k in FFTW order.
struct GridSpec {
  int N = 256;
  double L = 32.0;
  Vec2 center{};

  double dx() const { return 2.0 * L / N; }
  double dxi() const;
  Vec2 x_at(int a, int b) const { return {-L + b * dx(), -L + a * dx()}; }
  Vec2 xi_at(int a, int b) const;
  std::size_t size() const { return static_cast<std::size_t>(N) * N; }
};

class GridField {
 public:
  GridField() = default;
  explicit GridField(GridSpec spec, Space space = Space::Physical);

  const GridSpec& spec() const { return spec_; }
  Space space() const { return space_; }
  int N() const { return spec_.N; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }
  cplx& at(int a, int b) { return v_[static_cast<std::size_t>(a) * spec_.N + b]; }
  const cplx& at(int a, int b) const { return v_[static_cast<std::size_t>(a) * spec_.N + b]; }

  // Continuum-normalized transforms: f^(xi) = int f(x) e^{-i<x,xi>} dx and
  // f(x) = (2 pi)^{-2} int f^(xi) e^{i<x,xi>} dxi, sampled on the grid.
  void forward();
  void inverse();

  // Physical-space L^p norm with cell-area weights.
  double norm_p(double p) const;

 private:
  GridSpec spec_;
  Space space_ = Space::Physical;
  std::vector<cplx> v_;
};

GridField to_frequency(GridField f);
GridField to_physical(GridField f);

// Level below which spectral samples count as round-off: rel_tol * max |fhat|.
double spectral_floor(const GridField& fhat, double rel_tol = 1e-12);

// rho and boundary projection at every frequency sample of a grid.
struct FrequencyGeometry {
  GridSpec spec;
  std::vector<double> rho;
  std::vector<Vec2> proj;
};

FrequencyGeometry frequency_geometry(const CompatiblePair& pair, const GridSpec& spec, bool with_proj = true);

// F^{-1}[symbol F f] for f physical; symbol sampled in frequency storage order.
GridField apply_multiplier(const GridField& f, const std::vector<double>& symbol);
GridField apply_multiplier(const GridField& f, const std::function<double(Vec2)>& symbol);
GridField apply_frequency_multiplier(const GridField& fhat, const std::vector<double>& symbol);

// (1 - rho/t)_+^lambda; zero at rho = t.
double bochner_riesz_symbol(double rho, double t, double lambda);
GridField bochner_riesz_mean(const FrequencyGeometry& geom, const GridField& f, double t, double lambda);

GridField apply_quasiradial_multiplier(const FrequencyGeometry& geom, const GridField& f,
                                       const std::function<double(double)>& m);

// Dyadic pieces of (1 - rho)_+^lambda: a low-frequency term phi_0(2^{2M}|xi|),
// a middle term (phi_0(2^{-2M}|xi|) - phi_0(2^{2M}|xi|)) phi_1(rho) and
// 2^{-k lambda} phi_2(2^k (1 - rho)) for k0 <= k <= K.
class BochnerRieszDecomposition {
 public:
  static constexpr int kFirstDyadic = 2;

  BochnerRieszDecomposition(double lambda, int M, double delta_min);

  int terms() const { return 2 + (K_ - kFirstDyadic + 1); }
  int K() const { return K_; }
  double low(double xi_norm) const;
  double middle(double xi_norm, double rho) const;
  double dyadic(int k, double rho) const;
  // Sum of the first `count` pieces (all when count < 0).
  double partial_sum(double xi_norm, double rho, int count = -1) const;

 private:
  double lambda_;
  int M_;
  int K_;
};

// Low cutoff: 1 on [-1, 1], supported in [-2, 2], decreasing in |s|.
double low_cutoff(double s);

struct LogGrid {
  double t_min = 1.0;
  double t_max = 1.0;
  double step = 0.01;  // in log t

  std::vector<double> points() const;
};

// rho-range [lo, hi] of the frequency support of fhat (|fhat| > rel_tol max).
void spectral_rho_range(const FrequencyGeometry& geom, const GridField& fhat, double& lo, double& hi,
                        double rel_tol = 1e-12);

// t-grid of log step delta*step_factor over the band where the annulus meets
// the spectrum of fhat (|fhat| > 1e-6 max).
LogGrid annulus_t_grid(const FrequencyGeometry& geom, const GridField& fhat, double delta, double step_factor = 0.125);

// (int |psi_t * f|^2 dt/t)^{1/2}, trapezoid in log t. Throws a configuration
// error when the step exceeds delta/8.
GridField square_function_annulus(const FrequencyGeometry& geom, const GridField& f, double delta,
                                  const LogGrid& t_grid);

// (int |R_t^lambda f|^2 dt/t)^{1/2} over the truncated t-grid.
GridField square_function_glambda(const FrequencyGeometry& geom, const GridField& f, double lambda,
                                  const LogGrid& t_grid);

// Pointwise products/sums used by the probes.
double lp_norm_of_abs(const std::vector<double>& values, double cell_area, double p);

}  // namespace qrad
