#include "qrad/multiplier_norm.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fft_internal.hpp"
#include "qrad/errors.hpp"
#include "qrad/fit.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

constexpr double kLo = 0.5, kHi = 2.0;
constexpr int kOversample = 8;
constexpr int kOctaves = 4;  // octaves used for the tail fit

struct Pass {
  double head = 0.0;  // integral over |tau| <= cut
  std::vector<double> octaves;  // increments over the last octaves below the cut
  double cut = 0.0;
};

// Midpoint samples of g on [1/2, 2], zero padded; |tau| limited to a quarter
// of the Nyquist frequency.
Pass integrate(const std::function<double(double)>& m, double alpha, double t, int n) {
  const double h = (kHi - kLo) / n;
  const int P = kOversample * n;
  std::vector<std::complex<double>> buf(P);
  for (int k = 0; k < n; ++k) {
    const double s = kLo + (k + 0.5) * h;
    buf[k] = sobolev_cutoff(s) * m(t * s);
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fft_planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    plan = fftw_plan_dft_1d(P, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fft_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double dtau = 2.0 * std::numbers::pi / (P * h);
  Pass out;
  out.cut = 0.25 * std::numbers::pi / h;
  const int lmax = static_cast<int>(out.cut / dtau);
  std::vector<double> edges;
  for (int o = kOctaves; o >= 0; --o) edges.push_back(std::ldexp(out.cut, -o));
  out.octaves.assign(kOctaves, 0.0);
  // |F(-tau)| = |F(tau)| since g is real; integrate both sides.
  for (int l = 1; l <= lmax; ++l) {
    const double tau = l * dtau;
    const double v = 2.0 * std::norm(buf[l] * h) * std::pow(tau, 2.0 * alpha) * dtau;
    out.head += v;
    for (int o = 0; o < kOctaves; ++o)
      if (tau > edges[o] && tau <= edges[o + 1]) out.octaves[o] += v;
  }
  if (alpha == 0.0) out.head += std::norm(buf[0] * h) * dtau;
  return out;
}

}  // namespace

double sobolev_cutoff(double s) { return mother_bump((s - 1.25) / 0.75); }

WeightedNormEstimate weighted_transform_norm(const std::function<double(double)>& m, double alpha, double t,
                                             const SobolevNormOptions& opt) {
  if (!(t > 0.0)) fail(ErrorKind::Validation, "scale t must be positive");
  WeightedNormEstimate est;
  double previous = -1.0;
  for (int n = opt.initial_samples; n <= opt.max_samples; n *= 2) {
    const Pass p = integrate(m, alpha, t, n);
    if (p.head == 0.0) {
      est.samples = n;
      est.value = 0.0;
      return est;
    }
    std::vector<double> xs, ys;
    for (int o = 0; o < kOctaves; ++o)
      if (p.octaves[o] > 0.0) {
        xs.push_back(o);
        ys.push_back(std::log(p.octaves[o]));
      }
    double ratio = 0.0;
    if (xs.size() >= 2) ratio = std::exp(fit_linear(xs, ys).slope);
    est.octave_ratio = ratio;
    est.samples = n;
    // Negligible tails (below rounding of the head) carry no trend.
    const double last = p.octaves.back();
    const bool live_tail = last > 1e-12 * p.head;
    if (live_tail && ratio >= opt.divergence_ratio) {
      est.divergent = true;
      est.value = std::numeric_limits<double>::infinity();
      if (previous >= 0.0) return est;
      previous = 0.0;
      continue;
    }
    est.divergent = false;
    const double tail = live_tail && ratio > 0.0 ? last * ratio / (1.0 - ratio) : 0.0;
    est.value = std::sqrt(p.head + tail);
    if (previous > 0.0 && std::fabs(est.value - previous) <= opt.rel_tol * est.value) return est;
    previous = est.value;
  }
  return est;
}

SobolevNormResult hormander_sobolev_norm(const std::function<double(double)>& m, double alpha,
                                         const std::vector<double>& t_grid, const SobolevNormOptions& opt) {
  if (t_grid.empty()) fail(ErrorKind::Configuration, "t-grid is empty");
  SobolevNormResult r;
  for (double t : t_grid) {
    const WeightedNormEstimate e = weighted_transform_norm(m, alpha, t, opt);
    r.per_t.push_back(e.value);
    r.samples = std::max(r.samples, e.samples);
    if (e.divergent) r.divergent = true;
    if (r.t_at_sup == 0.0 || e.value > r.value) {
      r.value = e.value;
      r.t_at_sup = t;
    }
  }
  return r;
}

}  // namespace qrad
