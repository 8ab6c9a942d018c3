#include "qrad/fit.hpp"

#include <algorithm>
#include <cmath>

#include "qrad/errors.hpp"

namespace qrad {

double LinearFit::max_relative_residual() const {
  double m = 0.0;
  for (std::size_t k = 0; k < residuals.size(); ++k)
    m = std::max(m, std::fabs(residuals[k]) / std::max(std::fabs(fitted[k]), 1e-300));
  return m;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::Validation, "fit needs at least two matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::Validation, "fit abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    f.fitted.push_back(f.intercept + f.slope * x[k]);
    f.residuals.push_back(y[k] - f.fitted.back());
  }
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) fail(ErrorKind::Numeric, "log-log fit needs positive data");
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(y[k]));
  }
  return fit_linear(lx, ly);
}

LinearFit fit_log_squared(const std::vector<double>& deltas, const std::vector<double>& y) {
  std::vector<double> x;
  for (double d : deltas) {
    const double l = std::log(1.0 / d);
    x.push_back(l * l);
  }
  return fit_linear(x, y);
}

double spread(const std::vector<double>& values) {
  if (values.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

}  // namespace qrad
