#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace polybern {

using Point = Eigen::VectorXd;
using MultiIndex = std::vector<int>;

/// Absolute tolerance for face membership; polytopes are assumed unit-scale.
inline constexpr double kGeomTol = 1e-9;

/// Finite set S in R^m with positive weights c; conv(S) must be full-dimensional.
struct WeightedSupport {
  int dim = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return points.size(); }

  /// True when every coordinate of every point is an integer.
  bool is_lattice() const;
};

/// Checks the WeightedSupport invariants. Throws Validation or DegenerateHull.
void validate(const WeightedSupport& support);

/// Relatively open face K of P = conv(S).
///
/// `indices` lists the points of S lying in the closure of K. The normal is a
/// unit inward vector u with <y,u> = offset on the closure and <y,u> > offset
/// elsewhere on P; the top face (the interior) carries a zero normal and the
/// identity as tangent basis.
struct Face {
  std::vector<std::size_t> indices;
  Point normal;
  double offset = 0.0;
  int dim = 0;
  Eigen::MatrixXd tangent_basis;  // m x dim, orthonormal columns spanning X_K
};

/// A facet supplied by the caller (required for m > 3).
struct FacetSpec {
  std::vector<std::size_t> indices;
  Point normal;
  double offset = 0.0;
};

class FaceLattice {
 public:
  FaceLattice() = default;
  FaceLattice(int dim, std::vector<Face> faces);

  int dim() const noexcept { return dim_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const Face& face(std::size_t i) const { return faces_.at(i); }
  std::size_t top_index() const noexcept { return faces_.size() - 1; }
  const Face& top() const { return faces_.back(); }

  /// Indices of faces whose closure contains face i (excluding i itself).
  const std::vector<std::size_t>& containing(std::size_t i) const { return containing_.at(i); }
  /// Faces of dimension dim-1 lying in the closure of face i.
  std::vector<std::size_t> boundary_faces(std::size_t i) const;
  const std::vector<std::size_t>& facets() const noexcept { return facets_; }
  std::vector<std::size_t> vertices() const;

 private:
  int dim_ = 0;
  std::vector<Face> faces_;  // ascending dimension, top face last
  std::vector<std::vector<std::size_t>> containing_;
  std::vector<std::size_t> facets_;
};

/// Face lattice of conv(S) by brute-force facet enumeration (m <= 3).
FaceLattice build_face_lattice(const WeightedSupport& support);

/// Face lattice completed from caller-supplied facets; works for any m.
FaceLattice build_face_lattice(const WeightedSupport& support,
                               const std::vector<FacetSpec>& facets);

/// Index of the relatively open face containing x.
std::size_t locate_face_index(const FaceLattice& lattice, const Point& x,
                              double tol = kGeomTol);

const Face& locate_face(const FaceLattice& lattice, const Point& x, double tol = kGeomTol);

bool contains(const FaceLattice& lattice, const Point& x, double tol = kGeomTol);

/// Smallest facet slack <x,u> - lambda(u); negative outside P.
double boundary_distance(const FaceLattice& lattice, const Point& x);

/// Average of the vertices in the closure of face i.
Point face_centroid(const WeightedSupport& support, const FaceLattice& lattice, std::size_t i);

}  // namespace polybern
