#pragma once

#include <cstddef>
#include <vector>

namespace polybern {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y ~ slope * x + intercept; needs two distinct x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace polybern
