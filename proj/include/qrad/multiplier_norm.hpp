#pragma once

#include <functional>
#include <vector>

namespace qrad {

// Cutoff phi(s) = Phi((s - 1.25)/0.75), supported in [1/2, 2].
double sobolev_cutoff(double s);

struct SobolevNormOptions {
  int initial_samples = 1024;  // samples of phi m(t.) on [1/2, 2]
  int max_samples = 1 << 17;
  double rel_tol = 0.01;  // stability required between refinements
  double divergence_ratio = 0.95;  // octave increment ratio flagged as divergent
};

struct WeightedNormEstimate {
  double value = 0.0;  // includes the geometric tail beyond the cut
  double octave_ratio = 0.0;  // fitted ratio of successive octave increments
  bool divergent = false;
  int samples = 0;
};

struct SobolevNormResult {
  double value = 0.0;  // +inf when divergent
  bool divergent = false;
  double t_at_sup = 0.0;
  int samples = 0;
  std::vector<double> per_t;
};

// (int |F[phi m(t.)](tau)|^2 |tau|^{2 alpha} dtau)^{1/2} for one t, refined
// until two successive sample counts agree within rel_tol.
WeightedNormEstimate weighted_transform_norm(const std::function<double(double)>& m, double alpha, double t,
                                             const SobolevNormOptions& opt = {});

// Supremum over the t-grid; divergence is reported by flag, never thrown.
SobolevNormResult hormander_sobolev_norm(const std::function<double(double)>& m, double alpha,
                                         const std::vector<double>& t_grid, const SobolevNormOptions& opt = {});

}  // namespace qrad
