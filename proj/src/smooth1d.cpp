#include "polybern/smooth1d.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "polybern/error.hpp"
#include "polybern/quadrature.hpp"

namespace polybern {

namespace {

// (sinh(u/2) / (u/2))^2 = integral of e^{u s} against the unit hat on [-1, 1]
double hat_center(double u) {
  if (std::abs(u) < 1e-4) return 1.0 + u * u / 12.0;
  const double s = std::sinh(0.5 * u) / (0.5 * u);
  return s * s;
}

// (e^u - 1 - u) / u^2 = integral over [0,1] of e^{u s} (1 - s)
double hat_end(double u) {
  if (std::abs(u) < 0.1) {
    double term = 0.5, sum = 0.0;
    for (int k = 0; k <= 8; ++k) {
      sum += term;
      term *= u / (k + 3);
    }
    return sum;
  }
  return (std::expm1(u) - u) / (u * u);
}

}  // namespace

double todd_mu(double tau) {
  if (std::abs(tau) < kToddSeriesCutoff) {
    const double t2 = tau * tau;
    return 0.5 + tau * (1.0 / 12 + t2 * (-1.0 / 720 + t2 * (1.0 / 30240 + t2 * (-1.0 / 1209600 + t2 / 47900160))));
  }
  return 1.0 / (-std::expm1(-tau)) - 1.0 / tau;
}

double todd_mu_prime(double tau) {
  if (std::abs(tau) < kToddSeriesCutoff) {
    const double t2 = tau * tau;
    return 1.0 / 12 + t2 * (-1.0 / 240 + t2 * (1.0 / 6048 + t2 * (-1.0 / 172800 + t2 * 9.0 / 47900160)));
  }
  const double s = std::sinh(0.5 * tau);
  return 1.0 / (tau * tau) - 1.0 / (4.0 * s * s);
}

double todd_log_chi(double tau) {
  if (tau == 0.0) return 0.0;
  if (tau > 0.0) return tau + std::log(-std::expm1(-tau)) - std::log(tau);
  return std::log(-std::expm1(tau)) - std::log(-tau);
}

double todd_tau(double x, const ToddConfig& cfg) {
  if (!(x > kToddEndpointGap && x < 1.0 - kToddEndpointGap)) {
    std::ostringstream os;
    os << "x = " << x << " is too close to an endpoint for tau(x)";
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  if (x == 0.5) return 0.0;

  double t = std::abs(x - 0.5) < 0.2 ? 12.0 * (x - 0.5) : (x > 0.5 ? 1.0 / (1.0 - x) : -1.0 / x);
  double lo = -1.0, hi = 1.0;
  while (todd_mu(lo) > x) lo *= 2.0;
  while (todd_mu(hi) < x) hi *= 2.0;
  if (t <= lo || t >= hi) t = 0.5 * (lo + hi);

  for (int it = 0; it < cfg.max_iter; ++it) {
    const double r = todd_mu(t) - x;
    if (std::abs(r) <= cfg.tol) return t;
    if (r > 0.0)
      hi = t;
    else
      lo = t;
    double next = t - r / todd_mu_prime(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  std::ostringstream os;
  os << "tau(x) did not converge at x = " << x;
  throw Error(ErrorCode::NoConvergence, os.str());
}

double todd_delta(double x, const ToddConfig& cfg) {
  const double tau = todd_tau(x, cfg);
  return todd_log_chi(tau) - x * tau;
}

double todd_density_tau(double z, double tau) {
  if (tau == 0.0) return 1.0;
  if (tau > 0.0) return tau * std::exp((z - 1.0) * tau) / (-std::expm1(-tau));
  return tau * std::exp(z * tau) / std::expm1(tau);
}

double todd_density(double z, double x, const ToddConfig& cfg) {
  return todd_density_tau(z, todd_tau(x, cfg));
}

double todd_defining_function(double x, const ToddConfig& cfg) {
  return 1.0 / todd_mu_prime(todd_tau(x, cfg));
}

double todd_variance(double x, const ToddConfig& cfg) { return todd_mu_prime(todd_tau(x, cfg)); }

double GridDensity1D::trapezoid() const {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * step;
}

GridDensity1D todd_grid(double x, int n_grid, const ToddConfig& cfg) {
  if (n_grid < 2) throw Error(ErrorCode::Validation, "grid needs at least two points");
  const double tau = todd_tau(x, cfg);
  GridDensity1D g;
  g.n_grid = n_grid;
  g.step = 1.0 / (n_grid - 1);
  g.values.resize(static_cast<std::size_t>(n_grid));
  for (int j = 0; j < n_grid; ++j) g.values[static_cast<std::size_t>(j)] = todd_density_tau(j * g.step, tau);
  return g;
}

ToddMoments todd_moments(double x, const ToddConfig& cfg) {
  const double tau = todd_tau(x, cfg);
  const Rule1D rule = gauss_legendre(cfg.quadrature_nodes);
  ToddMoments mo;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = rule.nodes[i];
    const double wr = rule.weights[i] * todd_density_tau(z, tau);
    mo.mass += wr;
    mo.mean += wr * z;
    mo.second += wr * z * z;
  }
  return mo;
}

std::vector<double> todd_node_masses(double x, int n_grid, const ToddConfig& cfg) {
  if (n_grid < 2) throw Error(ErrorCode::Validation, "grid needs at least two points");
  const double tau = todd_tau(x, cfg);
  const double h = 1.0 / (n_grid - 1);
  const double log_c = -todd_log_chi(tau);
  std::vector<double> w(static_cast<std::size_t>(n_grid));
  const double log_mid = std::log(h * hat_center(tau * h));
  for (int j = 1; j + 1 < n_grid; ++j) w[static_cast<std::size_t>(j)] = std::exp(log_c + tau * j * h + log_mid);
  w.front() = std::exp(log_c + std::log(h * hat_end(tau * h)));
  w.back() = std::exp(log_c + tau + std::log(h * hat_end(-tau * h)));
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

double smooth_bernstein_apply(const std::function<double(double)>& f, int N, double x, int n_grid,
                              const ToddConfig& cfg, kernels::Exec exec) {
  if (N < 1) throw Error(ErrorCode::Validation, "N must be at least 1");
  if (n_grid < 2) throw Error(ErrorCode::Validation, "grid needs at least two points");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::OutsidePolytope, "x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return f(x);

  const double drift = std::abs(todd_grid(x, n_grid, cfg).trapezoid() - 1.0);
  if (drift > kGridMassTol) {
    std::ostringstream os;
    os << "trapezoid mass off by " << drift << " on " << n_grid << " points";
    throw Error(ErrorCode::GridTooCoarse, os.str());
  }

  const std::vector<double> w = todd_node_masses(x, n_grid, cfg);
  std::vector<double> acc = w;
  for (int k = 1; k < N; ++k) {
    acc = kernels::convolve_1d(exec, acc, w);
    double total = 0.0;
    for (double v : acc) total += v;
    for (double& v : acc) v /= total;
  }
  const double scale = 1.0 / (static_cast<double>(N) * (n_grid - 1));
  double out = 0.0;
  for (std::size_t k = 0; k < acc.size(); ++k) out += acc[k] * f(static_cast<double>(k) * scale);
  return out;
}

}  // namespace polybern
