#pragma once

#include <initializer_list>
#include <string>

#include "polybern/measure.hpp"
#include "polybern/presets.hpp"

namespace testutil {

inline polybern::Point pt(std::initializer_list<double> v) {
  polybern::Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) p(i++) = c;
  return p;
}

inline polybern::ExpFamily family(const std::string& name) { return polybern::ExpFamily(polybern::preset(name).support); }

inline polybern::WeightedSupport support(int dim, std::initializer_list<std::initializer_list<double>> pts) {
  polybern::WeightedSupport s;
  s.dim = dim;
  for (auto p : pts) {
    s.points.push_back(pt(p));
    s.weights.push_back(1.0);
  }
  return s;
}

}  // namespace testutil
