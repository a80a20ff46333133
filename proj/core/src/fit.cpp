#include "gfalm/fit.hpp"

#include <cmath>
#include <vector>

#include "gfalm/error.hpp"

namespace gfalm {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("least_squares: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("least_squares: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("least_squares: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = n;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.slope * x[i] + f.intercept);
      ss_res += r * r;
    }
    f.r_squared = 1.0 - ss_res / syy;
  }
  return f;
}

LinearFit fit_log_window(std::span<const double> x, std::span<const double> value, double lo,
                         double hi) {
  if (x.size() != value.size()) throw DomainError("fit_log_window: size mismatch");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (value[i] >= lo && value[i] <= hi && value[i] > 0.0) {
      xs.push_back(x[i]);
      ys.push_back(std::log(value[i]));
    }
  }
  return least_squares(xs, ys);
}

}  // namespace gfalm
