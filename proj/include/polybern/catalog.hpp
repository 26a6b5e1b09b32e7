#pragma once

#include <string>
#include <vector>

#include "polybern/function.hpp"

namespace polybern {

/// Built-in test functions on R^m, all with closed-form derivatives of every order.
///
///   one              constant 1
///   z, z2, z3, z4    powers of the first coordinate
///   x1, x2, x3       coordinate functions
///   mono:a,b,...     z1^a z2^b ...
///   cos              cos(3 <w, z>), w = (1, 0.7, 0.4) truncated to m
///   cos:k:w1,w2,...  cos(k <w, z>)
///
/// Throws Validation for unknown names or exponents that do not fit m.
SmoothFunction make_function(const std::string& name, int dim);

/// Plain names accepted by make_function (parametrized forms excluded).
std::vector<std::string> catalog_names();

SmoothFunction monomial(const MultiIndex& exponents);
SmoothFunction cosine(double k, const Point& w);

}  // namespace polybern
