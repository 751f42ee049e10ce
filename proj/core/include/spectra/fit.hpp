#pragma once

#include <span>
#include <utility>

namespace spectra {

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double std_error = 0;
  double ci_low = 0;  // 95% interval from the t distribution on n-2 dof
  double ci_high = 0;
};

// Least-squares slope of log(y) against log(x). Needs at least three points
// with at least two distinct x and all values positive.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

}  // namespace spectra
