#pragma once

#include <string>
#include <vector>

#include "polybern/geometry.hpp"

namespace polybern {

struct Preset {
  std::string name;
  std::string description;
  WeightedSupport support;
};

/// interval, simplex2, square, cube, weighted-interval, weighted-simplex2,
/// segment3, square-centered.
const std::vector<Preset>& presets();

/// Lookup by name; "triangle" is accepted for simplex2. Throws Validation.
const Preset& preset(const std::string& name);

}  // namespace polybern
