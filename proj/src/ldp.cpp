#include "polybern/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "polybern/error.hpp"
#include "polybern/fit.hpp"

namespace polybern {

namespace {

double face_tol(const ExpFamily& fam) { return std::max(fam.newton().interior_threshold, kGeomTol); }

// min over xi of log sum_i w_i exp<p_i - y, B xi>; the negated minimum is the
// Legendre transform at y of the family restricted to these points.
double restricted_conjugate(const std::vector<Point>& pts, const std::vector<double>& w,
                            const Eigen::MatrixXd& B, const Point& y, const LegendreBudget& budget) {
  const Eigen::Index d = B.cols();
  std::vector<Eigen::VectorXd> q(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) q[i] = B.transpose() * (pts[i] - y);

  struct Eval {
    double value;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
  };
  auto eval = [&](const Eigen::VectorXd& xi) {
    std::vector<double> e(pts.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      e[i] = std::log(w[i]) + q[i].dot(xi);
      top = std::max(top, e[i]);
    }
    double total = 0.0;
    for (double& v : e) total += (v = std::exp(v - top));
    Eval out{top + std::log(total), Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
    for (std::size_t i = 0; i < pts.size(); ++i) out.grad += (e[i] / total) * q[i];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Eigen::VectorXd c = q[i] - out.grad;
      out.hess.noalias() += (e[i] / total) * c * c.transpose();
    }
    return out;
  };

  Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
  Eval cur = eval(xi);
  if (d == 0) return -cur.value;
  for (int it = 0; it < budget.max_iter; ++it) {
    const double res = cur.grad.lpNorm<Eigen::Infinity>();
    if (res <= budget.tol) return -cur.value;
    const Eigen::MatrixXd shifted = cur.hess + cur.grad.norm() * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd step = shifted.ldlt().solve(-cur.grad);
    if (!step.allFinite() || cur.grad.dot(step) >= 0.0) step = -cur.grad;
    const double slope = cur.grad.dot(step);
    const double flat = 8 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(cur.value));
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      Eval next = eval(xi + t * step);
      if (!std::isfinite(next.value)) continue;
      const bool armijo = next.value <= cur.value + 1e-4 * t * slope;
      const bool polish = next.value <= cur.value + flat && next.grad.lpNorm<Eigen::Infinity>() < res;
      if (armijo || polish) {
        xi += t * step;
        cur = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (cur.grad.lpNorm<Eigen::Infinity>() <= budget.tol) return -cur.value;
  throw Error(ErrorCode::NoConvergence, "Legendre transform maximization did not converge");
}

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) throw std::logic_error("value() on +infinity");
  return value_;
}

bool in_face_closure(const ExpFamily& fam, const Point& x, const Point& y) {
  if (y.size() != fam.dim() || !y.allFinite()) return false;
  const double tol = face_tol(fam);
  if (!contains(fam.lattice(), y, tol)) return false;
  const std::size_t k = fam.evaluation_face(x);
  if (k == fam.lattice().top_index()) return true;
  const Face& K = fam.lattice().face(k);
  return std::abs(y.dot(K.normal) - K.offset) <= tol;
}

ExtendedReal rate_closed(const ExpFamily& fam, const Point& x, const Point& y) {
  const Face& K = fam.lattice().face(fam.evaluation_face(x));
  if (!in_face_closure(fam, x, y)) return ExtendedReal::infinity();
  const Point tau = face_tau(fam, K, x);
  const double delta_x = fam.log_partition(K, tau) - x.dot(tau);
  return ExtendedReal::finite(delta_x - legendre_delta(fam, y) + (x - y).dot(tau));
}

double rate_legendre(const ExpFamily& fam, const Point& x, const Point& y, const LegendreBudget& budget) {
  if (!in_face_closure(fam, x, y))
    throw Error(ErrorCode::Validation, "rate_legendre needs y in the closure of the face of x");
  const DiscreteMeasure bx = measure_at(fam, x);
  const Face& L = fam.lattice().face(fam.evaluation_face(y));
  std::vector<Point> pts;
  std::vector<double> w;
  for (std::size_t i : L.indices) {
    if (!(bx.masses[i] > 0.0)) continue;
    pts.push_back(bx.atoms[i]);
    w.push_back(bx.masses[i]);
  }
  if (pts.empty()) throw Error(ErrorCode::Validation, "no mass of B(x) on the face of y");
  return restricted_conjugate(pts, w, L.tangent_basis, y, budget);
}

double log_binomial_ball(double a, double b, double p, int N, double y, double radius) {
  const double lp = std::log(p), lq = std::log1p(-p);
  std::vector<double> terms;
  for (int k = 0; k <= N; ++k) {
    const double z = a + (b - a) * k / N;
    if (std::abs(z - y) > radius * (1.0 + 1e-12)) continue;
    terms.push_back(std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0) + k * lp + (N - k) * lq);
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

DecayEstimate empirical_decay(const ExpFamily& fam, const Point& x, const Point& y, double radius,
                              const std::vector<int>& N_list, std::uint64_t samples, std::uint64_t seed,
                              DecayMethod method) {
  if (!(radius > 0.0)) throw Error(ErrorCode::Validation, "radius must be positive");
  if (N_list.size() < 2) throw Error(ErrorCode::Validation, "decay fit needs at least two N");
  const DiscreteMeasure bx = measure_at(fam, x);
  const bool binomial_ok = fam.dim() == 1 && fam.support().size() == 2;
  if (method == DecayMethod::exact_binomial && !binomial_ok)
    throw Error(ErrorCode::Validation, "exact binomial path needs a two-point support on a line");
  const bool exact = method == DecayMethod::exact_binomial || (method == DecayMethod::automatic && binomial_ok);

  DecayEstimate est;
  est.exact = exact;
  est.N = N_list;
  std::vector<double> ns;
  for (std::size_t t = 0; t < N_list.size(); ++t) {
    const int N = N_list[t];
    if (N < 1) throw Error(ErrorCode::Validation, "N must be at least 1");
    double lp;
    if (exact) {
      const double a = bx.atoms[0](0), b = bx.atoms[1](0);
      lp = log_binomial_ball(a, b, bx.masses[1], N, y(0), radius);
      if (!std::isfinite(lp)) {
        std::ostringstream os;
        os << "no lattice point of the N = " << N << " mean within the ball";
        throw Error(ErrorCode::InsufficientHits, os.str());
      }
    } else {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(N)};
      std::mt19937_64 rng(seq);
      std::discrete_distribution<std::size_t> pick(bx.masses.begin(), bx.masses.end());
      std::uint64_t hits = 0;
      for (std::uint64_t s = 0; s < samples; ++s) {
        Point sum = Point::Zero(fam.dim());
        for (int i = 0; i < N; ++i) sum += bx.atoms[pick(rng)];
        if ((sum / N - y).norm() <= radius) ++hits;
      }
      est.hits.push_back(hits);
      if (hits < kMinHits) {
        std::ostringstream os;
        os << "only " << hits << " of " << samples << " samples hit the ball at N = " << N;
        throw Error(ErrorCode::InsufficientHits, os.str());
      }
      lp = std::log(static_cast<double>(hits) / static_cast<double>(samples));
    }
    est.neg_log_p.push_back(-lp);
    ns.push_back(N);
  }
  est.slope = least_squares(ns, est.neg_log_p).slope;
  return est;
}

}  // namespace polybern
