#pragma once

#include <vector>

namespace qrad {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::vector<double> residuals;  // y - fitted
  std::vector<double> fitted;
  double max_relative_residual() const;
};

// Least squares y = a + b x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log y against log x.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Least squares y = a + b (log(1/delta))^2.
LinearFit fit_log_squared(const std::vector<double>& deltas, const std::vector<double>& y);

// max / min of the values.
double spread(const std::vector<double>& values);

}  // namespace qrad
