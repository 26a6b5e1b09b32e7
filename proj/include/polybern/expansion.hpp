#pragma once

#include <map>
#include <utility>
#include <vector>

#include "polybern/approx.hpp"
#include "polybern/fit.hpp"
#include "polybern/function.hpp"

namespace polybern {

/// Values p_{alpha,l}(x) needed by L_0, ..., L_{max_nu} at one point.
struct ExpansionTable {
  Point x;
  int max_nu = 0;
  std::map<std::pair<MultiIndex, int>, double> entries;

  double p(const MultiIndex& alpha, int l) const;
};

inline constexpr int kMaxNu = 3;

ExpansionTable build_expansion_table(const ExpFamily& fam, const Point& x, int max_nu = kMaxNu);

using DerivativeOracle = std::function<std::optional<double>(const MultiIndex&)>;

/// (L_nu f)(x). Throws MissingDerivative if the oracle lacks a needed order.
double apply_operator(const ExpansionTable& table, int nu, const DerivativeOracle& derivs);
double apply_operator(const ExpansionTable& table, int nu, const SmoothFunction& f);

/// B_N(f)(x) - sum_{nu < n} N^{-nu} (L_nu f)(x).
double expansion_remainder(const ExpFamily& fam, const SmoothFunction& f, const Point& x, int N, int n);
double expansion_remainder(const ExpFamily& fam, const ExpansionTable& table, const SmoothFunction& f,
                           int N, int n);

struct OrderEstimate {
  double slope = 0.0;
  std::vector<int> N;
  std::vector<double> remainder;  // one per N, including excluded ones
  std::vector<int> used;          // N values entering the fit
};

/// Remainders with |r| below this are left out of the log-log fit.
inline constexpr double kRemainderFloor = 1e-13;

/// Least-squares slope of log|remainder| against log N. Throws DegenerateFit
/// when fewer than two remainders clear the floor.
OrderEstimate order_estimate(const ExpFamily& fam, const SmoothFunction& f, const Point& x, int n,
                             const std::vector<int>& N_list, Exec exec = Exec::serial);

/// D_u g(x) = <A(x) grad g(x), u> with the analytic gradient of g.
double defining_derivative(const ExpFamily& fam, const SmoothFunction& g, const Point& x, const Point& u);

/// |D_u D_v g - D_v D_u g| at x, the outer derivative by central differences.
double commutator_residual(const ExpFamily& fam, const SmoothFunction& g, const Point& x, const Point& u,
                           const Point& v, double h = 1e-4);

}  // namespace polybern
