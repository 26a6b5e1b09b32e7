#include "polybern/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "polybern/error.hpp"

namespace polybern {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::Validation, "Gauss rule needs at least one node");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // nodes ascending on [0,1]
    r.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + z);
    r.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
  return r;
}

PolytopeRule simplex_rule(const std::vector<Point>& vertices, int order) {
  const int d = static_cast<int>(vertices.size()) - 1;
  if (d < 1) throw Error(ErrorCode::Validation, "simplex needs at least two vertices");
  const Eigen::Index m = vertices.front().size();
  Eigen::MatrixXd edges(m, d);
  for (int k = 0; k < d; ++k) edges.col(k) = vertices[static_cast<std::size_t>(k + 1)] - vertices[0];
  const double jac = std::abs(edges.determinant());  // = d! * volume

  const Rule1D g = gauss_legendre(order);
  PolytopeRule out;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Point p = vertices[0];
    double w = jac;
    double rest = 1.0;
    for (int k = 0; k < d; ++k) {
      const double u = g.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      w *= g.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] * std::pow(1.0 - u, d - 1 - k);
      const double lambda = rest * u;
      p += lambda * edges.col(k);
      rest -= lambda;
    }
    out.nodes.push_back(std::move(p));
    out.weights.push_back(w);
    int k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == order) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  return out;
}

std::vector<std::vector<Point>> barycentric_simplices(const WeightedSupport& support,
                                                      const FaceLattice& lattice) {
  std::vector<std::vector<Point>> out;
  std::vector<Point> chain;
  auto walk = [&](auto&& self, std::size_t face) -> void {
    chain.push_back(face_centroid(support, lattice, face));
    if (lattice.face(face).dim == 0)
      out.push_back(chain);
    else
      for (std::size_t sub : lattice.boundary_faces(face)) self(self, sub);
    chain.pop_back();
  };
  walk(walk, lattice.top_index());
  return out;
}

PolytopeRule polytope_rule(const WeightedSupport& support, const FaceLattice& lattice, int order) {
  PolytopeRule all;
  for (const auto& simplex : barycentric_simplices(support, lattice)) {
    PolytopeRule r = simplex_rule(simplex, order);
    all.nodes.insert(all.nodes.end(), r.nodes.begin(), r.nodes.end());
    all.weights.insert(all.weights.end(), r.weights.begin(), r.weights.end());
  }
  return all;
}

}  // namespace polybern
