#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's algorithms: brute-force path enumeration instead of the grid DP,
// set-partition sums instead of the cumulant recursions, bisection instead of
// Newton.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;

inline double binomial_pmf(int N, int k, double p) {
  long double logc = std::lgamma(N + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(N - k + 1.0L);
  return static_cast<double>(std::exp(logc + k * std::log((long double)p) + (N - k) * std::log1p(-(long double)p)));
}

inline double kl_bernoulli(double y, double x) {
  auto term = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); };
  return term(y, x) + term(1.0 - y, 1.0 - x);
}

inline double binary_entropy(double x) {
  auto t = [](double a) { return a == 0.0 ? 0.0 : -a * std::log(a); };
  return t(x) + t(1.0 - x);
}

/// Law of beta_1 + ... + beta_N by enumerating all |S|^N sequences; keys are
/// coordinates rounded to 1e-9.
inline std::map<std::vector<long long>, double> enumerate_paths(const std::vector<Vec>& pts,
                                                                const std::vector<double>& w, int N) {
  std::map<std::vector<long long>, double> out;
  const std::size_t n = pts.size();
  std::vector<std::size_t> seq(static_cast<std::size_t>(N), 0);
  while (true) {
    Vec sum = Vec::Zero(pts.front().size());
    double prod = 1.0;
    for (std::size_t s : seq) {
      sum += pts[s];
      prod *= w[s];
    }
    std::vector<long long> key(static_cast<std::size_t>(sum.size()));
    for (Eigen::Index d = 0; d < sum.size(); ++d) key[static_cast<std::size_t>(d)] = std::llround(sum(d) * 1e9);
    out[key] += prod;
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return out;
}

/// All set partitions of {0..n-1} as block lists (restricted growth strings).
inline std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      std::vector<std::vector<int>> p(static_cast<std::size_t>(blocks));
      for (int k = 0; k < n; ++k) p[static_cast<std::size_t>(a[static_cast<std::size_t>(k)])].push_back(k);
      out.push_back(p);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      a[static_cast<std::size_t>(i)] = b;
      rec(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(0, 0);
  return out;
}

/// Items of a multi-index: alpha = (2,1) -> axes {0,0,1}.
inline std::vector<int> items_of(const std::vector<int>& alpha) {
  std::vector<int> items;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int k = 0; k < alpha[i]; ++k) items.push_back(static_cast<int>(i));
  return items;
}

/// E[prod_{i in block} (X_{axis_i} - x_{axis_i})] under sum_a w_a delta_{p_a}.
inline double block_moment(const std::vector<Vec>& pts, const std::vector<double>& w, const Vec& x,
                           const std::vector<int>& axes) {
  double acc = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    double v = w[a];
    for (int ax : axes) v *= pts[a](ax) - x(ax);
    acc += v;
  }
  return acc;
}

/// Joint cumulant via the Moebius sum over set partitions of the block.
inline double joint_cumulant(const std::vector<Vec>& pts, const std::vector<double>& w, const Vec& x,
                             const std::vector<int>& axes) {
  const int n = static_cast<int>(axes.size());
  double total = 0.0;
  for (const auto& part : set_partitions(n)) {
    const int k = static_cast<int>(part.size());
    double term = std::tgamma(k) * ((k - 1) % 2 ? -1.0 : 1.0);
    for (const auto& block : part) {
      std::vector<int> ax;
      for (int i : block) ax.push_back(axes[static_cast<std::size_t>(i)]);
      term *= block_moment(pts, w, x, ax);
    }
    total += term;
  }
  return total;
}

/// sum over set partitions of alpha's items into l blocks of size >= 2 of
/// the product of joint cumulants.
inline double partition_coefficient(const std::vector<Vec>& pts, const std::vector<double>& w, const Vec& x,
                                    const std::vector<int>& alpha, int l) {
  const auto items = items_of(alpha);
  double total = 0.0;
  for (const auto& part : set_partitions(static_cast<int>(items.size()))) {
    if (static_cast<int>(part.size()) != l) continue;
    bool ok = true;
    for (const auto& b : part) ok = ok && b.size() >= 2;
    if (!ok) continue;
    double prod = 1.0;
    for (const auto& b : part) {
      std::vector<int> ax;
      for (int i : b) ax.push_back(items[static_cast<std::size_t>(i)]);
      prod *= joint_cumulant(pts, w, x, ax);
    }
    total += prod;
  }
  return total;
}

/// Coefficients c_0..c_L of the polynomial through (N, values[N-1]), N = 1..L+1.
inline std::vector<double> interpolate_in_N(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd b(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) V(r, c) = std::pow(r + 1.0, c);
    b(r) = values[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd c = V.fullPivLu().solve(b);
  return {c.data(), c.data() + n};
}

/// Root of a continuous increasing g on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// max of a concave g on [lo, hi] by golden section.
inline double golden_max(const std::function<double(double)>& g, double lo, double hi, int iters = 300) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  for (int i = 0; i < iters; ++i) {
    if (g(c) > g(d))
      b = d;
    else
      a = c;
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return g(0.5 * (a + b));
}

/// Todd moment map from its defining integral: mean of z e^{z tau} on [0,1]
/// by composite Simpson with n panels.
inline double todd_mu_by_simpson(double tau, int n = 2000) {
  auto f = [&](double z, int k) { return std::pow(z, k) * std::exp(tau * (z - (tau > 0 ? 1.0 : 0.0))); };
  double num = 0, den = 0;
  const double h = 1.0 / n;
  for (int i = 0; i <= n; ++i) {
    const double wgt = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    num += wgt * f(i * h, 1);
    den += wgt * f(i * h, 0);
  }
  return num / den;
}

}  // namespace oracle
