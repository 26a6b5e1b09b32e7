#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "polybern/kernels.hpp"
#include "polybern/measure.hpp"

namespace polybern {

using kernels::Exec;
using ScalarFn = std::function<double(const Point&)>;

struct ConvolutionConfig {
  std::size_t max_atoms = 2'000'000;
  Exec exec = Exec::serial;
};

/// Law of the mean of N independent draws from B(x).
///
/// `gammas` are the undilated sums beta_1 + ... + beta_N, sorted
/// lexicographically; `atoms` are gammas / N.
struct ConvolutionPower {
  int N = 1;
  std::vector<Point> gammas;
  std::vector<Point> atoms;
  std::vector<double> masses;

  DiscreteMeasure measure() const { return {atoms, masses}; }
};

/// N-fold convolution of sum_i w_i delta_{p_i}. Only points with w_i > 0 take
/// part. Lattice inputs use a dense grid; otherwise sums are merged on a 1e-12
/// coordinate grid. Throws AtomBlowup past cfg.max_atoms.
ConvolutionPower convolve_weights(const std::vector<Point>& points, const std::vector<double>& weights,
                                  int N, const ConvolutionConfig& cfg = {});

ConvolutionPower convolution_power(const ExpFamily& fam, const Point& x, int N,
                                   const ConvolutionConfig& cfg = {});

/// B_N(f)(x) = sum_gamma m_N^gamma(x) f(gamma / N).
double bernstein_apply(const ExpFamily& fam, const ScalarFn& f, int N, const Point& x,
                       const ConvolutionConfig& cfg = {});

/// B_N(f) at many points; with Exec::parallel the points are spread over threads.
std::vector<double> bernstein_apply_many(const ExpFamily& fam, const ScalarFn& f, int N,
                                         const std::vector<Point>& xs, Exec exec = Exec::serial);

/// All multi-indices of length m and total order k, lexicographically descending
/// in the first coordinate (k,0,..), (k-1,1,..), ...
std::vector<MultiIndex> multi_indices(int m, int k);
int order(const MultiIndex& a);

/// I_{N,alpha}(x) = sum_gamma m_N^gamma(x) (gamma - N x)^alpha.
double central_moment_direct(const ExpFamily& fam, const Point& x, const MultiIndex& alpha, int N,
                             const ConvolutionConfig& cfg = {});
double central_moment_direct(const ConvolutionPower& cp, const Point& x, const MultiIndex& alpha);

/// Joint cumulants kappa_beta of B(x) - x for 1 <= |beta| <= max_order.
using CumulantTable = std::map<MultiIndex, double>;
CumulantTable single_step_cumulants(const ExpFamily& fam, const Point& x, int max_order);

inline constexpr int kMaxMultiIndexOrder = 8;

/// p_{alpha,0}, ..., p_{alpha,|alpha|/2} with I_{N,alpha} = sum_l p_{alpha,l} N^l.
std::vector<double> expansion_coefficients(const ExpFamily& fam, const Point& x, const MultiIndex& alpha);
std::vector<double> expansion_coefficients(const CumulantTable& kappa, const MultiIndex& alpha);

/// |I_{N,alpha+e_j} - D_j I_{N,alpha} - sum_i alpha_i I_{N,alpha-e_i} I_{N,e_i+e_j}| with
/// D_j g = (A grad g)_j and the gradient taken by central differences of step h.
double recursion_check(const ExpFamily& fam, const Point& x, const MultiIndex& alpha, int j, int N,
                       double h = 1e-5);

}  // namespace polybern
