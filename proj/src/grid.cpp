#include "qrad/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fft_internal.hpp"
#include "qrad/errors.hpp"
#include "qrad/smoothstep.hpp"

namespace qrad {

namespace {

constexpr double kPi = std::numbers::pi;

int signed_index(int k, int N) { return k < N / 2 ? k : k - N; }

fftw_plan cached_plan(int N, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(detail::fft_planner_mutex());
  auto it = plans.find({N, sign});
  if (it != plans.end()) return it->second;
  std::vector<cplx> scratch(static_cast<std::size_t>(N) * N);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_2d(N, N, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) fail(ErrorKind::Numeric, "FFT plan creation failed");
  plans[{N, sign}] = plan;
  return plan;
}

void execute(std::vector<cplx>& v, int N, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_execute_dft(cached_plan(N, sign), p, p);
}

// Per-thread accumulation buffers summed in a fixed order.
struct Accumulator {
  explicit Accumulator(std::size_t n) {
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    buffers.assign(threads, std::vector<double>(n, 0.0));
  }
  std::vector<double>& local() {
#ifdef _OPENMP
    return buffers[omp_get_thread_num()];
#else
    return buffers[0];
#endif
  }
  std::vector<double> total() const {
    std::vector<double> out(buffers[0].size(), 0.0);
    for (const auto& b : buffers)
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
    return out;
  }
  std::vector<std::vector<double>> buffers;
};

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = std::log(t[k + 1] / t[k]);
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

GridField square_function(const FrequencyGeometry& geom, const GridField& f, const LogGrid& t_grid,
                          const std::function<double(double, double)>& symbol) {
  GridField fhat = to_frequency(f);
  const auto ts = t_grid.points();
  const auto w = trapezoid_weights(ts);
  const std::size_t n = fhat.spec().size();
  Accumulator acc(n);
#pragma omp parallel
  {
    std::vector<cplx> work(n);
#pragma omp for schedule(static)
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (w[k] == 0.0) continue;
      const double t = ts[k];
      bool any = false;
      for (std::size_t q = 0; q < n; ++q) {
        const double s = fhat.values()[q] == cplx{} ? 0.0 : symbol(geom.rho[q], t);
        work[q] = s * fhat.values()[q];
        any = any || s != 0.0;
      }
      if (!any) continue;
      GridField g(fhat.spec(), Space::Frequency);
      g.values().swap(work);
      g.inverse();
      auto& loc = acc.local();
      for (std::size_t q = 0; q < n; ++q) loc[q] += w[k] * std::norm(g.values()[q]);
      work.swap(g.values());
    }
  }
  const auto sum = acc.total();
  GridField out(f.spec(), Space::Physical);
  for (std::size_t q = 0; q < n; ++q) out.values()[q] = std::sqrt(sum[q]);
  return out;
}

}  // namespace

std::mutex& detail::fft_planner_mutex() {
  static std::mutex m;
  return m;
}

double GridSpec::dxi() const { return kPi / L; }

Vec2 GridSpec::xi_at(int a, int b) const {
  return {center.x + signed_index(b, N) * dxi(), center.y + signed_index(a, N) * dxi()};
}

GridField::GridField(GridSpec spec, Space space) : spec_(spec), space_(space), v_(spec.size()) {
  if (spec.N < 2 || (spec.N & (spec.N - 1)) != 0) fail(ErrorKind::Configuration, "grid size must be a power of two");
  if (!(spec.L > 0.0)) fail(ErrorKind::Configuration, "grid half-width must be positive");
}

void GridField::forward() {
  if (space_ != Space::Physical) fail(ErrorKind::Validation, "forward transform of a frequency field");
  const int N = spec_.N;
  const double dx = spec_.dx(), L = spec_.L;
  const Vec2 c = spec_.center;
  if (c.x != 0.0 || c.y != 0.0) {
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) at(a, b) *= std::polar(1.0, -(b * c.x + a * c.y) * dx);
  }
  execute(v_, N, FFTW_FORWARD);
  const cplx phase = std::polar(dx * dx, L * (c.x + c.y));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) at(a, b) *= ((a + b) & 1) ? -phase : phase;
  space_ = Space::Frequency;
}

void GridField::inverse() {
  if (space_ != Space::Frequency) fail(ErrorKind::Validation, "inverse transform of a physical field");
  const int N = spec_.N;
  const double dx = spec_.dx(), dxi = spec_.dxi(), L = spec_.L;
  const Vec2 c = spec_.center;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      if ((a + b) & 1) at(a, b) = -at(a, b);
  execute(v_, N, FFTW_BACKWARD);
  const cplx phase = std::polar(dxi * dxi / (4.0 * kPi * kPi), -L * (c.x + c.y));
  const bool shifted = c.x != 0.0 || c.y != 0.0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      at(a, b) *= phase;
      if (shifted) at(a, b) *= std::polar(1.0, (b * c.x + a * c.y) * dx);
    }
  space_ = Space::Physical;
}

double GridField::norm_p(double p) const {
  if (space_ != Space::Physical) fail(ErrorKind::Validation, "norm of a frequency field");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : v_) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  for (const auto& z : v_) s += std::pow(std::abs(z), p);
  return std::pow(s * spec_.dx() * spec_.dx(), 1.0 / p);
}

GridField to_frequency(GridField f) {
  f.forward();
  return f;
}

GridField to_physical(GridField f) {
  f.inverse();
  return f;
}

double spectral_floor(const GridField& fhat, double rel_tol) {
  double m = 0.0;
  for (const auto& z : fhat.values()) m = std::max(m, std::abs(z));
  return rel_tol * m;
}

FrequencyGeometry frequency_geometry(const CompatiblePair& pair, const GridSpec& spec, bool with_proj) {
  FrequencyGeometry g;
  g.spec = spec;
  const int N = spec.N;
  g.rho.assign(spec.size(), 0.0);
  if (with_proj) g.proj.assign(spec.size(), Vec2{});
#pragma omp parallel for schedule(dynamic, 4)
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      const std::size_t q = static_cast<std::size_t>(a) * N + b;
      const Vec2 xi = spec.xi_at(a, b);
      if (with_proj) {
        if (xi.x == 0.0 && xi.y == 0.0) continue;
        pair.rho_and_project(xi, g.rho[q], g.proj[q]);
      } else {
        g.rho[q] = pair.rho(xi);
      }
    }
  }
  return g;
}

GridField apply_frequency_multiplier(const GridField& fhat, const std::vector<double>& symbol) {
  if (symbol.size() != fhat.spec().size()) fail(ErrorKind::Validation, "symbol size does not match the grid");
  GridField g = fhat;
  for (std::size_t q = 0; q < symbol.size(); ++q) g.values()[q] *= symbol[q];
  g.inverse();
  return g;
}

GridField apply_multiplier(const GridField& f, const std::vector<double>& symbol) {
  return apply_frequency_multiplier(to_frequency(f), symbol);
}

GridField apply_multiplier(const GridField& f, const std::function<double(Vec2)>& symbol) {
  const GridSpec& s = f.spec();
  std::vector<double> sym(s.size());
  for (int a = 0; a < s.N; ++a)
    for (int b = 0; b < s.N; ++b) sym[static_cast<std::size_t>(a) * s.N + b] = symbol(s.xi_at(a, b));
  return apply_multiplier(f, sym);
}

double bochner_riesz_symbol(double rho, double t, double lambda) {
  if (rho >= t) return 0.0;
  const double u = 1.0 - rho / t;
  return lambda == 0.0 ? 1.0 : std::pow(u, lambda);
}

GridField bochner_riesz_mean(const FrequencyGeometry& geom, const GridField& f, double t, double lambda) {
  if (!(t > 0.0)) fail(ErrorKind::Validation, "scale t must be positive");
  std::vector<double> sym(geom.rho.size());
  for (std::size_t q = 0; q < sym.size(); ++q) sym[q] = bochner_riesz_symbol(geom.rho[q], t, lambda);
  return apply_multiplier(f, sym);
}

GridField apply_quasiradial_multiplier(const FrequencyGeometry& geom, const GridField& f,
                                       const std::function<double(double)>& m) {
  std::vector<double> sym(geom.rho.size());
  for (std::size_t q = 0; q < sym.size(); ++q) sym[q] = m(geom.rho[q]);
  return apply_multiplier(f, sym);
}

double low_cutoff(double s) { return smooth_step(2.0 - std::fabs(s)); }

BochnerRieszDecomposition::BochnerRieszDecomposition(double lambda, int M, double delta_min)
    : lambda_(lambda), M_(M) {
  if (!(delta_min > 0.0 && delta_min < 1.0)) fail(ErrorKind::Validation, "delta_min must lie in (0, 1)");
  K_ = std::max(kFirstDyadic, static_cast<int>(std::ceil(std::log2(1.0 / delta_min))));
}

double BochnerRieszDecomposition::low(double xi_norm) const { return low_cutoff(std::ldexp(xi_norm, 2 * M_)); }

double BochnerRieszDecomposition::middle(double xi_norm, double rho) const {
  if (rho >= 1.0) return 0.0;
  const double window = low_cutoff(std::ldexp(xi_norm, -2 * M_)) - low(xi_norm);
  if (window == 0.0) return 0.0;
  const double u = 1.0 - rho;
  // phi_1 = (1 - rho)^lambda minus the dyadic tail, which sums to
  // u^lambda * plateau_bump(2^{k0} u) for the first dyadic index k0.
  return window * std::pow(u, lambda_) * (1.0 - plateau_bump(std::ldexp(u, kFirstDyadic)));
}

double BochnerRieszDecomposition::dyadic(int k, double rho) const {
  if (rho >= 1.0) return 0.0;
  const double v = std::ldexp(1.0 - rho, k);
  // phi_2(v) = v^lambda (phi(v) - phi(2v)), supported in (1/4, 1).
  const double chi = plateau_bump(v) - plateau_bump(2.0 * v);
  if (chi == 0.0) return 0.0;
  return std::pow(2.0, -k * lambda_) * std::pow(v, lambda_) * chi;
}

double BochnerRieszDecomposition::partial_sum(double xi_norm, double rho, int count) const {
  if (count < 0) count = terms();
  double s = 0.0;
  if (count >= 1) s += low(xi_norm);
  if (count >= 2) s += middle(xi_norm, rho);
  for (int k = kFirstDyadic; k <= K_ && (k - kFirstDyadic + 2) < count; ++k) s += dyadic(k, rho);
  return s;
}

std::vector<double> LogGrid::points() const {
  if (!(t_min > 0.0) || t_max < t_min || !(step > 0.0)) fail(ErrorKind::Configuration, "invalid log grid");
  const double span = std::log(t_max / t_min);
  const int n = std::max(1, static_cast<int>(std::ceil(span / step - 1e-12)));
  std::vector<double> t(n + 1);
  for (int k = 0; k <= n; ++k) t[k] = t_min * std::exp(span * k / n);
  return t;
}

void spectral_rho_range(const FrequencyGeometry& geom, const GridField& fhat, double& lo, double& hi,
                        double rel_tol) {
  double amax = 0.0;
  for (const auto& z : fhat.values()) amax = std::max(amax, std::abs(z));
  lo = std::numeric_limits<double>::infinity();
  hi = 0.0;
  if (amax == 0.0) {
    lo = hi = 0.0;
    return;
  }
  for (std::size_t q = 0; q < geom.rho.size(); ++q) {
    if (std::abs(fhat.values()[q]) <= rel_tol * amax) continue;
    lo = std::min(lo, geom.rho[q]);
    hi = std::max(hi, geom.rho[q]);
  }
}

LogGrid annulus_t_grid(const FrequencyGeometry& geom, const GridField& fhat, double delta, double step_factor) {
  double lo = 0.0, hi = 0.0;
  spectral_rho_range(geom, fhat, lo, hi, 1e-6);
  LogGrid g;
  g.t_min = std::max(lo, 1e-12) / (1.0 + delta);
  g.t_max = std::max(hi, 1e-12) / (1.0 - delta);
  g.step = step_factor * delta;
  return g;
}

GridField square_function_annulus(const FrequencyGeometry& geom, const GridField& f, double delta,
                                  const LogGrid& t_grid) {
  if (t_grid.step > delta / 8.0 * (1.0 + 1e-12))
    fail(ErrorKind::Configuration, "log-scale step exceeds delta/8");
  return square_function(geom, f, t_grid,
                         [delta](double rho, double t) { return mother_bump((rho / t - 1.0) / delta); });
}

GridField square_function_glambda(const FrequencyGeometry& geom, const GridField& f, double lambda,
                                  const LogGrid& t_grid) {
  return square_function(geom, f, t_grid,
                         [lambda](double rho, double t) { return bochner_riesz_symbol(rho, t, lambda); });
}

double lp_norm_of_abs(const std::vector<double>& values, double cell_area, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(std::fabs(v), p);
  return std::pow(s * cell_area, 1.0 / p);
}

}  // namespace qrad
