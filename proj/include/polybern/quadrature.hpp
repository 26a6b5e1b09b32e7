#pragma once

#include <vector>

#include "polybern/geometry.hpp"

namespace polybern {

/// n-point Gauss-Legendre rule mapped to [0, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Rule1D gauss_legendre(int n);

struct PolytopeRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

/// Collapsed (Duffy) tensor Gauss rule with `order` points per direction on the
/// simplex spanned by `vertices` (d+1 points of R^m, d = m).
PolytopeRule simplex_rule(const std::vector<Point>& vertices, int order);

/// Simplices of the barycentric subdivision of P: one per flag
/// vertex < edge < ... < P, spanned by the face centroids along the flag.
std::vector<std::vector<Point>> barycentric_simplices(const WeightedSupport& support,
                                                      const FaceLattice& lattice);

PolytopeRule polytope_rule(const WeightedSupport& support, const FaceLattice& lattice, int order);

}  // namespace polybern
