#include "polybern/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polybern/error.hpp"

namespace polybern {

namespace {

double factorial(const MultiIndex& a) {
  double r = 1.0;
  for (int v : a)
    for (int k = 2; k <= v; ++k) r *= k;
  return r;
}

std::string describe(const MultiIndex& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ')';
  return os.str();
}

}  // namespace

double ExpansionTable::p(const MultiIndex& alpha, int l) const {
  auto it = entries.find({alpha, l});
  return it == entries.end() ? 0.0 : it->second;
}

ExpansionTable build_expansion_table(const ExpFamily& fam, const Point& x, int max_nu) {
  if (max_nu < 0 || max_nu > kMaxNu) throw Error(ErrorCode::Validation, "max_nu must lie in [0, 3]");
  ExpansionTable t;
  t.x = x;
  t.max_nu = max_nu;
  const int m = fam.dim();
  t.entries[{MultiIndex(m, 0), 0}] = 1.0;
  if (max_nu == 0) return t;
  const CumulantTable kappa = single_step_cumulants(fam, x, 2 * max_nu);
  for (int k = 1; k <= 2 * max_nu; ++k)
    for (const auto& alpha : multi_indices(m, k)) {
      const auto p = expansion_coefficients(kappa, alpha);
      for (int l = 0; l < static_cast<int>(p.size()); ++l) t.entries[{alpha, l}] = p[static_cast<std::size_t>(l)];
    }
  return t;
}

double apply_operator(const ExpansionTable& table, int nu, const DerivativeOracle& derivs) {
  if (nu < 0 || nu > table.max_nu) throw Error(ErrorCode::Validation, "operator index outside the table");
  const int m = static_cast<int>(table.x.size());
  double acc = 0.0;
  for (int k = nu; k <= 2 * nu; ++k) {
    if (k == 1) continue;  // p_{alpha,0} vanishes for |alpha| = 1
    for (const auto& alpha : multi_indices(m, k)) {
      const double p = table.p(alpha, k - nu);
      if (p == 0.0 && k > 0) continue;
      const auto d = derivs(alpha);
      if (!d) throw Error(ErrorCode::MissingDerivative, "derivative " + describe(alpha) + " not supplied");
      acc += p * *d / factorial(alpha);
    }
  }
  return acc;
}

double apply_operator(const ExpansionTable& table, int nu, const SmoothFunction& f) {
  return apply_operator(table, nu, [&](const MultiIndex& a) { return f.derivative(table.x, a); });
}

double expansion_remainder(const ExpFamily& fam, const ExpansionTable& table, const SmoothFunction& f,
                           int N, int n) {
  if (n < 0 || n > table.max_nu + 1) throw Error(ErrorCode::Validation, "expansion order outside the table");
  double r = bernstein_apply(fam, f.value, N, table.x);
  for (int nu = 0; nu < n; ++nu) r -= std::pow(static_cast<double>(N), -nu) * apply_operator(table, nu, f);
  return r;
}

double expansion_remainder(const ExpFamily& fam, const SmoothFunction& f, const Point& x, int N, int n) {
  if (n < 0 || n > kMaxNu + 1) throw Error(ErrorCode::Validation, "expansion order must lie in [0, 4]");
  return expansion_remainder(fam, build_expansion_table(fam, x, std::max(n - 1, 0)), f, N, n);
}

OrderEstimate order_estimate(const ExpFamily& fam, const SmoothFunction& f, const Point& x, int n,
                             const std::vector<int>& N_list, Exec exec) {
  const ExpansionTable table = build_expansion_table(fam, x, std::max(n - 1, 0));
  OrderEstimate est;
  est.N = N_list;
  est.remainder.assign(N_list.size(), 0.0);
  kernels::for_each_index(exec, N_list.size(), [&](std::size_t i) {
    est.remainder[i] = expansion_remainder(fam, table, f, N_list[i], n);
  });
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (!(std::abs(est.remainder[i]) >= kRemainderFloor)) continue;
    est.used.push_back(N_list[i]);
    lx.push_back(std::log(static_cast<double>(N_list[i])));
    ly.push_back(std::log(std::abs(est.remainder[i])));
  }
  if (lx.size() < 2) {
    std::ostringstream os;
    os << "only " << lx.size() << " remainder(s) above " << kRemainderFloor;
    throw Error(ErrorCode::DegenerateFit, os.str());
  }
  est.slope = least_squares(lx, ly).slope;
  return est;
}

double defining_derivative(const ExpFamily& fam, const SmoothFunction& g, const Point& x, const Point& u) {
  const int m = fam.dim();
  Eigen::VectorXd grad(m);
  for (int k = 0; k < m; ++k) {
    MultiIndex e(m, 0);
    e[static_cast<std::size_t>(k)] = 1;
    const auto d = g.derivative(x, e);
    if (!d) throw Error(ErrorCode::MissingDerivative, "gradient of " + g.name + " not supplied");
    grad(k) = *d;
  }
  return u.dot(moment_matrices(fam, x).A * grad);
}

double commutator_residual(const ExpFamily& fam, const SmoothFunction& g, const Point& x, const Point& u,
                           const Point& v, double h) {
  const int m = fam.dim();
  auto outer = [&](const Point& a, const Point& b) {
    // D_a (D_b g)
    Eigen::VectorXd grad(m);
    for (int k = 0; k < m; ++k) {
      Point xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      grad(k) = (defining_derivative(fam, g, xp, b) - defining_derivative(fam, g, xm, b)) / (2 * h);
    }
    return a.dot(moment_matrices(fam, x).A * grad);
  };
  return std::abs(outer(u, v) - outer(v, u));
}

}  // namespace polybern
