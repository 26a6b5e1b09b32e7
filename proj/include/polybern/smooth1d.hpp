#pragma once

#include <functional>
#include <vector>

#include "polybern/kernels.hpp"

namespace polybern {

// The smooth-density Bernstein measure on [0, 1]:
//   mu(tau) = 1/(1 - e^{-tau}) - 1/tau,  rho(z, x) = tau e^{z tau} / (e^tau - 1),  tau = tau(x).

struct ToddConfig {
  double tol = 1e-13;  // |mu(tau) - x| at exit of todd_tau
  int max_iter = 200;
  int quadrature_nodes = 64;
};

/// |tau| below this uses the Taylor branch of mu, mu' and chi.
inline constexpr double kToddSeriesCutoff = 0.1;
/// todd_tau accepts x in (eps, 1 - eps).
inline constexpr double kToddEndpointGap = 1e-10;

double todd_mu(double tau);
double todd_mu_prime(double tau);
/// log chi(tau), chi(tau) = (e^tau - 1) / tau.
double todd_log_chi(double tau);

/// Inverse of todd_mu. Throws NoConvergence (also for x outside (eps, 1-eps)).
double todd_tau(double x, const ToddConfig& cfg = {});

double todd_delta(double x, const ToddConfig& cfg = {});
double todd_density(double z, double x, const ToddConfig& cfg = {});
/// Density for a known tau; exactly 1 when tau == 0.
double todd_density_tau(double z, double tau);

/// K(x) = 1 / mu'(tau(x)).
double todd_defining_function(double x, const ToddConfig& cfg = {});
/// A(x) = mu'(tau(x)), the variance of rho(., x).
double todd_variance(double x, const ToddConfig& cfg = {});

struct GridDensity1D {
  int n_grid = 0;
  double step = 0.0;
  std::vector<double> values;

  double trapezoid() const;
};

GridDensity1D todd_grid(double x, int n_grid, const ToddConfig& cfg = {});

/// Integrals of 1, z, z^2 against rho(., x) by Gauss-Legendre.
struct ToddMoments {
  double mass = 0.0;
  double mean = 0.0;
  double second = 0.0;
};
ToddMoments todd_moments(double x, const ToddConfig& cfg = {});

/// Mass rho puts on the hat function of each grid node; sums to 1 and has
/// barycenter x in exact arithmetic.
std::vector<double> todd_node_masses(double x, int n_grid, const ToddConfig& cfg = {});

/// Trapezoid mass of the sampled density may differ from 1 by at most this.
inline constexpr double kGridMassTol = 1e-6;

/// B_N(f)(x) for the smooth measure. Throws GridTooCoarse, OutsidePolytope.
double smooth_bernstein_apply(const std::function<double(double)>& f, int N, double x, int n_grid,
                              const ToddConfig& cfg = {}, kernels::Exec exec = kernels::Exec::serial);

}  // namespace polybern
