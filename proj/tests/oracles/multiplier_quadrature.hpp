#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "qrad/multiplier_norm.hpp"

namespace qrad::oracle {

// (int |F[phi m(t.)](tau)|^2 |tau|^{2 alpha} dtau)^{1/2} by direct Simpson rules
// in s and tau; the integrand is smooth, so both rules converge fast.
inline double direct_norm(const std::function<double(double)>& m, double alpha, double t) {
  const int ns = 4000;
  const double a = 0.5, b = 2.0, hs = (b - a) / ns;
  std::vector<double> g(ns + 1), ws(ns + 1);
  for (int k = 0; k <= ns; ++k) {
    g[k] = sobolev_cutoff(a + k * hs) * m(t * (a + k * hs));
    ws[k] = (k == 0 || k == ns ? 1.0 : (k % 2 ? 4.0 : 2.0)) * hs / 3.0;
  }
  const int nt = 8000;
  const double T = 400.0, ht = T / nt;
  double acc = 0.0;
  for (int l = 0; l <= nt; ++l) {
    const double tau = l * ht;
    std::complex<double> F = 0.0;
    for (int k = 0; k <= ns; ++k) F += ws[k] * g[k] * std::polar(1.0, -(a + k * hs) * tau);
    const double w = (l == 0 || l == nt ? 1.0 : (l % 2 ? 4.0 : 2.0)) * ht / 3.0;
    acc += 2.0 * w * std::norm(F) * std::pow(tau, 2.0 * alpha);
  }
  return std::sqrt(acc);
}

}  // namespace qrad::oracle
