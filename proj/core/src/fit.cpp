#include "spectra/fit.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <set>
#include <vector>

#include "spectra/errors.hpp"

namespace spectra {

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ContractError("slope fit needs at least 3 points");
  std::set<double> xs;
  std::vector<double> lx, ly;
  for (auto [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw ContractError("slope fit needs positive coordinates");
    xs.insert(x);
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  if (xs.size() != points.size()) throw ContractError("slope fit needs distinct x values");

  const auto k = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  const double dof = k - 2;
  fit.std_error = std::sqrt(rss / dof / sxx);
  const double t = boost::math::quantile(boost::math::students_t(dof), 0.975);
  fit.ci_low = fit.slope - t * fit.std_error;
  fit.ci_high = fit.slope + t * fit.std_error;
  return fit;
}

}  // namespace spectra
