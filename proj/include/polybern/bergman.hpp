#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "polybern/approx.hpp"
#include "polybern/quadrature.hpp"

namespace polybern {

struct BergmanConfig {
  int order = 10;       // Gauss points per direction on each simplex
  int check_order = 8;  // second rule used for the error estimate
  double quad_tol = 1e-6;
  Exec exec = Exec::serial;
};

/// Everything about degree N that does not depend on x: S_N, the weighted
/// path counts P_N(gamma) and the norming constants R_N(gamma).
struct BergmanContext {
  explicit BergmanContext(ExpFamily family) : fam(std::move(family)) {}

  ExpFamily fam;
  int N = 1;
  std::vector<Point> gammas;         // S_N, lexicographic
  std::vector<double> path_weights;  // P_N(gamma)
  std::vector<double> R;             // R_N(gamma) with the main rule
  double quad_error = 0.0;           // max relative |R(order) - R(check_order)| / R
  PolytopeRule rule;

  std::size_t index_of(const Point& gamma) const;  // npos if gamma not in S_N
  /// m_N^gamma(x) aligned with `gammas`.
  std::vector<double> masses_at(const Point& x) const;
  /// Q = R / P.
  std::vector<double> norm_ratio() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  friend BergmanContext build_bergman_context(const ExpFamily&, int, const BergmanConfig&);
  std::map<std::vector<long long>, std::size_t> lookup_;
};

/// Weighted lattice-path counts: the N-fold convolution of sum c(a) delta_a.
ConvolutionPower path_weights(const ExpFamily& fam, int N, const ConvolutionConfig& cfg = {});

/// Throws Validation for non-lattice S, QuadratureFailure when the two rules disagree.
BergmanContext build_bergman_context(const ExpFamily& fam, int N, const BergmanConfig& cfg = {});

double bergman_kernel(const BergmanContext& ctx, const Point& x);
double bergman_bernstein_apply(const BergmanContext& ctx, const ScalarFn& f, const Point& x);
/// Barycenter of nu_N^x.
Point bergman_barycenter(const BergmanContext& ctx, const Point& x);

inline constexpr double kBalancedTol = 1e-7;

struct BalancedReport {
  double R_spread = 0.0;      // (max R - min R) / max R
  double Pi_spread = 0.0;     // max - min of Pi_N over the sample grid
  double bary_defect = 0.0;   // max |b(nu_N^x) - x|
  double mass_defect = 0.0;   // max |nu mass - m_N^gamma(x)|
  bool R_constant = false;
  bool Pi_constant = false;
  bool barycentric = false;
  bool same_measure = false;
  double bbbary_residual = 0.0;  // max |A grad log Pi / N - (b(nu) - x)|
  std::size_t grid_points = 0;
};

/// Sample grid: interior nodes of a low-order polytope rule.
std::vector<Point> bergman_sample_grid(const BergmanContext& ctx);

BalancedReport balanced_report(const BergmanContext& ctx, double tol = kBalancedTol, double fd_step = 1e-5);

struct RiemannCheck {
  double lhs = 0.0;  // integral of Pi_N nu_N(f) by the context rule
  double rhs = 0.0;  // sum over S_N of f(gamma / N)
  std::size_t lattice_points = 0;  // |NP cap Z^m|
  std::size_t missing = 0;         // |NP cap Z^m \ S_N|
};

RiemannCheck riemann_identity_check(const BergmanContext& ctx, const ScalarFn& f);

}  // namespace polybern
