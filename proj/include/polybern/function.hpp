#pragma once

#include <functional>
#include <optional>
#include <string>

#include "polybern/geometry.hpp"

namespace polybern {

/// A test function with (possibly partial) analytic derivatives.
///
/// `derivative(x, alpha)` returns d^alpha f(x), or nullopt when that order is
/// not available.
struct SmoothFunction {
  std::string name;
  std::function<double(const Point&)> value;
  std::function<std::optional<double>(const Point&, const MultiIndex&)> derivative;
};

}  // namespace polybern
