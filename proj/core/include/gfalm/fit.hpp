#pragma once

#include <cstddef>
#include <span>

namespace gfalm {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Coefficient of determination; 1 when y has no variance.
  double r_squared = 1.0;
  std::size_t points = 0;
};

/// Ordinary least squares y ~ slope * x + intercept. Needs >= 2 points with
/// distinct x; throws DomainError otherwise.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Fits ln(value) against x using only the samples with value in [lo, hi].
LinearFit fit_log_window(std::span<const double> x, std::span<const double> value, double lo,
                         double hi);

}  // namespace gfalm
