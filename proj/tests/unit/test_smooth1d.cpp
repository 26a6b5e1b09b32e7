#include "doctest.h"

#include <cmath>

#include "../oracles.hpp"
#include "polybern/error.hpp"
#include "polybern/smooth1d.hpp"

using namespace polybern;

TEST_CASE("moment map against Simpson quadrature") {
  for (double tau : {-30.0, -4.0, -0.5, -1e-3, 0.0, 0.05, 0.09, 0.11, 2.0, 25.0})
    CHECK(todd_mu(tau) == doctest::Approx(oracle::todd_mu_by_simpson(tau)).epsilon(1e-10));
  CHECK(todd_mu(0.0) == 0.5);
}

TEST_CASE("moment map is continuous across the series cutoff") {
  for (double c : {-kToddSeriesCutoff, kToddSeriesCutoff}) {
    const double a = std::nextafter(c, 0.0), b = std::nextafter(c, c > 0 ? 1.0 : -1.0);
    CHECK(std::abs(todd_mu(a) - todd_mu(b)) < 1e-15);
    CHECK(std::abs(todd_mu_prime(a) - todd_mu_prime(b)) < 1e-13);
  }
}

TEST_CASE("derivative of the moment map") {
  for (double tau : {-7.0, -0.3, 0.0, 0.02, 1.5, 12.0}) {
    const double h = 1e-5;
    const double fd = (todd_mu(tau + h) - todd_mu(tau - h)) / (2 * h);
    CHECK(todd_mu_prime(tau) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK(todd_mu_prime(0.0) == doctest::Approx(1.0 / 12));
}

TEST_CASE("inverse moment map") {
  for (double x : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) {
    const double tau = todd_tau(x);
    CHECK(std::abs(todd_mu(tau) - x) < 1e-13);
    const double ref = oracle::bisect([x](double t) { return todd_mu(t) - x; }, -1e7, 1e7);
    CHECK(tau == doctest::Approx(ref).epsilon(1e-8));
  }
  CHECK(todd_tau(0.5) == 0.0);
  CHECK_THROWS_AS(todd_tau(0.0), Error);
  CHECK_THROWS_AS(todd_tau(1.2), Error);
}

TEST_CASE("density is a probability density with mean x") {
  for (double x : {0.1, 0.45, 0.9}) {
    const auto m = todd_moments(x);
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.mean == doctest::Approx(x).epsilon(1e-12));
    CHECK(m.second - x * x == doctest::Approx(todd_variance(x)).epsilon(1e-9));
  }
}

TEST_CASE("defining function is the inverse variance") {
  for (double x : {0.2, 0.5, 0.8})
    CHECK(todd_defining_function(x) * todd_variance(x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("delta is the Legendre dual of the log partition") {
  // delta(x) = min_tau (log chi(tau) - x tau), checked by golden section
  for (double x : {0.15, 0.5, 0.7}) {
    const double sup = oracle::golden_max([x](double t) { return x * t - todd_log_chi(t); }, -60.0, 60.0);
    CHECK(todd_delta(x) == doctest::Approx(-sup).epsilon(1e-9));
  }
}

TEST_CASE("node masses sum to one and have mean x") {
  const int n = 512;
  for (double x : {0.3, 0.6}) {
    const auto w = todd_node_masses(x, n);
    REQUIRE(w.size() == static_cast<std::size_t>(n));
    double s = 0.0, m = 0.0;
    for (int k = 0; k < n; ++k) {
      s += w[static_cast<std::size_t>(k)];
      m += w[static_cast<std::size_t>(k)] * k / (n - 1.0);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m == doctest::Approx(x).epsilon(1e-6));
  }
}

TEST_CASE("smooth Bernstein reproduces affine functions to grid accuracy") {
  const auto f = [](double z) { return 2.0 - 3.0 * z; };
  for (int N : {1, 4}) CHECK(smooth_bernstein_apply(f, N, 0.4, 1024) == doctest::Approx(f(0.4)).epsilon(1e-6));
}

TEST_CASE("coarse grid is rejected") {
  try {
    smooth_bernstein_apply([](double z) { return z; }, 2, 0.001, 16);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooCoarse);
  }
}

TEST_CASE("serial and parallel smooth Bernstein agree bitwise") {
  const auto f = [](double z) { return std::cos(3 * z); };
  CHECK(smooth_bernstein_apply(f, 6, 0.35, 1024, {}, kernels::Exec::serial) ==
        smooth_bernstein_apply(f, 6, 0.35, 1024, {}, kernels::Exec::parallel));
}

TEST_CASE("midpoint density is uniform") {
  for (double z : {0.0, 0.3, 1.0}) CHECK(todd_density(z, 0.5) == 1.0);
}

TEST_CASE("smooth Bernstein converges to cos") {
  const auto f = [](double z) { return std::cos(3 * z); };
  for (double x : {0.2, 0.5, 0.8}) {
    double prev = INFINITY;
    for (int N : {1, 2, 4, 8}) {
      const double err = std::abs(smooth_bernstein_apply(f, N, x, 2048) - f(x));
      CHECK(err < prev);
      prev = err;
    }
  }
}
