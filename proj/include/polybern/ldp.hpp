#pragma once

#include <cstdint>
#include <vector>

#include "polybern/measure.hpp"

namespace polybern {

/// Real number or +infinity, kept as a tag rather than a float sentinel.
class ExtendedReal {
 public:
  static ExtendedReal infinity() { return ExtendedReal(true, 0.0); }
  static ExtendedReal finite(double v) { return ExtendedReal(false, v); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// Throws std::logic_error on the infinite value.
  double value() const;

 private:
  ExtendedReal(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

/// Closed form of the rate I^x(y) on the face K of x; +infinity off the closure of K.
ExtendedReal rate_closed(const ExpFamily& fam, const Point& x, const Point& y);

struct LegendreBudget {
  int max_iter = 200;
  double tol = 1e-12;
};

/// sup_tau <y,tau> - log sum_a m_a(x) e^{<a,tau>} by Newton on the face of y.
/// Requires y in the closure of the face of x (Validation otherwise).
double rate_legendre(const ExpFamily& fam, const Point& x, const Point& y, const LegendreBudget& budget = {});

/// True if y lies in the closure of the face that contains x.
bool in_face_closure(const ExpFamily& fam, const Point& x, const Point& y);

enum class DecayMethod { automatic, exact_binomial, monte_carlo };

struct DecayEstimate {
  double slope = 0.0;
  bool exact = false;
  std::vector<int> N;
  std::vector<double> neg_log_p;  // -log P(|mean_N - y| <= radius)
  std::vector<std::uint64_t> hits;  // Monte Carlo only
};

/// Minimum number of ball hits per N for a Monte Carlo estimate.
inline constexpr std::uint64_t kMinHits = 20;

/// Slope of -log p_N against N. The exact path needs a two-point support in
/// dimension 1; `automatic` picks it whenever possible. Throws InsufficientHits.
DecayEstimate empirical_decay(const ExpFamily& fam, const Point& x, const Point& y, double radius,
                              const std::vector<int>& N_list, std::uint64_t samples, std::uint64_t seed,
                              DecayMethod method = DecayMethod::automatic);

/// log P(|a + (b - a) K / N - y| <= radius) for K ~ Binomial(N, p).
double log_binomial_ball(double a, double b, double p, int N, double y, double radius);

}  // namespace polybern
