#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "polybern/geometry.hpp"

namespace polybern {

struct NewtonConfig {
  double tol = 1e-12;      // max-norm residual of the moment equation
  int max_iter = 200;
  /// Points closer than this to the boundary are evaluated on the nearby face.
  double interior_threshold = 1e-8;
};

/// The exponential family generated by (S, c): chi(tau) = sum_a c(a) exp<a, tau>.
class ExpFamily {
 public:
  explicit ExpFamily(WeightedSupport support, NewtonConfig cfg = {});
  ExpFamily(WeightedSupport support, FaceLattice lattice, NewtonConfig cfg = {});

  int dim() const noexcept { return support_.dim; }
  const WeightedSupport& support() const noexcept { return support_; }
  const FaceLattice& lattice() const noexcept { return lattice_; }
  const NewtonConfig& newton() const noexcept { return cfg_; }

  /// log chi restricted to the face's points, evaluated at tau in R^m.
  double log_partition(const Face& face, const Point& tau) const;

  /// Index of the face used to evaluate x (interior points near the boundary
  /// are routed to the closest face). Throws OutsidePolytope.
  std::size_t evaluation_face(const Point& x) const;

 private:
  WeightedSupport support_;
  FaceLattice lattice_;
  NewtonConfig cfg_;
};

/// Finitely supported probability measure.
struct DiscreteMeasure {
  std::vector<Point> atoms;
  std::vector<double> masses;

  Point barycenter() const;
  double total_mass() const;
};

struct MomentMatrices {
  Eigen::MatrixXd A;                 // covariance of B(x)
  std::optional<Eigen::MatrixXd> K;  // inverse of A, interior points only
};

/// Softmax-weighted mean of S (max-shifted).
Point moment_map(const ExpFamily& fam, const Point& tau);

/// tau_{S,c}(x) by damped Newton. Throws NoConvergence.
Point inverse_moment_map(const ExpFamily& fam, const Point& x);

/// tau_K(x) in tangent-basis coordinates of the face. Throws NoConvergence.
Eigen::VectorXd inverse_moment_map_on_face(const ExpFamily& fam, const Face& face, const Point& x);

/// tau_K(x) embedded in R^m (tangent_basis * coordinates).
Point face_tau(const ExpFamily& fam, const Face& face, const Point& x);

/// B_{S,c}(x); atoms are the points of S in their original order.
DiscreteMeasure measure_at(const ExpFamily& fam, const Point& x);

/// delta_K(x) = log chi_{S_K}(tau_K(x)) - <x, tau_K(x)> on the face containing x.
double legendre_delta(const ExpFamily& fam, const Point& x);

MomentMatrices moment_matrices(const ExpFamily& fam, const Point& x);

}  // namespace polybern
