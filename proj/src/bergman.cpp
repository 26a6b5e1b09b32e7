#include "polybern/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polybern/error.hpp"

namespace polybern {

namespace {

std::vector<long long> key_of(const Point& g) {
  std::vector<long long> k(static_cast<std::size_t>(g.size()));
  for (Eigen::Index d = 0; d < g.size(); ++d) k[static_cast<std::size_t>(d)] = std::llround(g(d));
  return k;
}

// Sum over rule nodes of w * m_N^gamma(node), one entry per gamma. Node values
// are computed in parallel chunks and added in node order.
std::vector<double> integrate_masses(const BergmanContext& ctx, const PolytopeRule& rule, Exec exec) {
  std::vector<double> total(ctx.gammas.size(), 0.0);
  constexpr std::size_t kChunk = 512;
  for (std::size_t start = 0; start < rule.nodes.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, rule.nodes.size() - start);
    std::vector<std::vector<double>> vals(len);
    kernels::for_each_index(exec, len, [&](std::size_t i) { vals[i] = ctx.masses_at(rule.nodes[start + i]); });
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t g = 0; g < total.size(); ++g) total[g] += rule.weights[start + i] * vals[i][g];
  }
  return total;
}

}  // namespace

std::size_t BergmanContext::index_of(const Point& gamma) const {
  auto it = lookup_.find(key_of(gamma));
  return it == lookup_.end() ? npos : it->second;
}

std::vector<double> BergmanContext::masses_at(const Point& x) const {
  const ConvolutionPower cp = convolution_power(fam, x, N);
  std::vector<double> out(gammas.size(), 0.0);
  for (std::size_t i = 0; i < cp.gammas.size(); ++i) {
    const std::size_t k = index_of(cp.gammas[i]);
    if (k == npos) throw Error(ErrorCode::Validation, "convolution atom outside S_N");
    out[k] = cp.masses[i];
  }
  return out;
}

std::vector<double> BergmanContext::norm_ratio() const {
  std::vector<double> q(R.size());
  for (std::size_t i = 0; i < R.size(); ++i) q[i] = R[i] / path_weights[i];
  return q;
}

ConvolutionPower path_weights(const ExpFamily& fam, int N, const ConvolutionConfig& cfg) {
  if (!fam.support().is_lattice()) throw Error(ErrorCode::Validation, "path weights need a lattice support");
  return convolve_weights(fam.support().points, fam.support().weights, N, cfg);
}

BergmanContext build_bergman_context(const ExpFamily& fam, int N, const BergmanConfig& cfg) {
  if (cfg.order < 1 || cfg.check_order < 1) throw Error(ErrorCode::Validation, "quadrature order must be positive");
  const ConvolutionPower pw = path_weights(fam, N);
  BergmanContext ctx(fam);
  ctx.N = N;
  ctx.gammas = pw.gammas;
  ctx.path_weights = pw.masses;
  for (std::size_t i = 0; i < ctx.gammas.size(); ++i) ctx.lookup_.emplace(key_of(ctx.gammas[i]), i);

  const auto& s = fam.support();
  ctx.rule = polytope_rule(s, fam.lattice(), cfg.order);
  ctx.R = integrate_masses(ctx, ctx.rule, cfg.exec);
  const std::vector<double> check = integrate_masses(ctx, polytope_rule(s, fam.lattice(), cfg.check_order), cfg.exec);
  for (std::size_t i = 0; i < ctx.R.size(); ++i) {
    if (!(ctx.R[i] > 0.0)) throw Error(ErrorCode::QuadratureFailure, "non-positive norming constant");
    ctx.quad_error = std::max(ctx.quad_error, std::abs(ctx.R[i] - check[i]) / ctx.R[i]);
  }
  if (ctx.quad_error > cfg.quad_tol) {
    std::ostringstream os;
    os << "orders " << cfg.check_order << " and " << cfg.order << " disagree by " << ctx.quad_error;
    throw Error(ErrorCode::QuadratureFailure, os.str());
  }
  return ctx;
}

double bergman_kernel(const BergmanContext& ctx, const Point& x) {
  const auto m = ctx.masses_at(x);
  double pi = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) pi += m[i] / ctx.R[i];
  return pi;
}

double bergman_bernstein_apply(const BergmanContext& ctx, const ScalarFn& f, const Point& x) {
  const auto m = ctx.masses_at(x);
  double pi = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0.0) continue;
    const double v = m[i] / ctx.R[i];
    pi += v;
    acc += v * f(ctx.gammas[i] / ctx.N);
  }
  return acc / pi;
}

Point bergman_barycenter(const BergmanContext& ctx, const Point& x) {
  const auto m = ctx.masses_at(x);
  double pi = 0.0;
  Point b = Point::Zero(x.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = m[i] / ctx.R[i];
    pi += v;
    b += v * ctx.gammas[i] / ctx.N;
  }
  return b / pi;
}

std::vector<Point> bergman_sample_grid(const BergmanContext& ctx) {
  return polytope_rule(ctx.fam.support(), ctx.fam.lattice(), 3).nodes;
}

BalancedReport balanced_report(const BergmanContext& ctx, double tol, double fd_step) {
  BalancedReport rep;
  const auto [rmin, rmax] = std::minmax_element(ctx.R.begin(), ctx.R.end());
  rep.R_spread = (*rmax - *rmin) / *rmax;

  const auto grid = bergman_sample_grid(ctx);
  rep.grid_points = grid.size();
  double pi_lo = INFINITY, pi_hi = -INFINITY;
  const int dim = ctx.fam.dim();
  for (const Point& x : grid) {
    const auto m = ctx.masses_at(x);
    double pi = 0.0;
    Point b = Point::Zero(dim);
    for (std::size_t i = 0; i < m.size(); ++i) {
      pi += m[i] / ctx.R[i];
      b += (m[i] / ctx.R[i]) * ctx.gammas[i] / ctx.N;
    }
    b /= pi;
    pi_lo = std::min(pi_lo, pi);
    pi_hi = std::max(pi_hi, pi);
    rep.bary_defect = std::max(rep.bary_defect, (b - x).lpNorm<Eigen::Infinity>());
    for (std::size_t i = 0; i < m.size(); ++i)
      rep.mass_defect = std::max(rep.mass_defect, std::abs(m[i] / (ctx.R[i] * pi) - m[i]));

    Eigen::VectorXd grad(dim);
    for (int k = 0; k < dim; ++k) {
      Point xp = x, xm = x;
      xp(k) += fd_step;
      xm(k) -= fd_step;
      grad(k) = (std::log(bergman_kernel(ctx, xp)) - std::log(bergman_kernel(ctx, xm))) / (2 * fd_step);
    }
    const Eigen::MatrixXd A = moment_matrices(ctx.fam, x).A;
    const Point predicted = A * grad / ctx.N;
    rep.bbbary_residual = std::max(rep.bbbary_residual, (predicted - (b - x)).lpNorm<Eigen::Infinity>());
  }
  rep.Pi_spread = pi_hi - pi_lo;
  rep.R_constant = rep.R_spread <= tol;
  rep.Pi_constant = rep.Pi_spread <= tol;
  rep.barycentric = rep.bary_defect <= tol;
  rep.same_measure = rep.mass_defect <= tol;
  return rep;
}

RiemannCheck riemann_identity_check(const BergmanContext& ctx, const ScalarFn& f) {
  RiemannCheck rc;
  std::vector<double> fg(ctx.gammas.size());
  for (std::size_t i = 0; i < ctx.gammas.size(); ++i) {
    fg[i] = f(ctx.gammas[i] / ctx.N);
    rc.rhs += fg[i];
  }
  for (std::size_t n = 0; n < ctx.rule.nodes.size(); ++n) {
    const auto m = ctx.masses_at(ctx.rule.nodes[n]);
    double v = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) v += fg[i] * m[i] / ctx.R[i];
    rc.lhs += ctx.rule.weights[n] * v;
  }

  const auto& pts = ctx.fam.support().points;
  const int dim = ctx.fam.dim();
  std::vector<long long> lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    double a = INFINITY, b = -INFINITY;
    for (const auto& p : pts) {
      a = std::min(a, p(d));
      b = std::max(b, p(d));
    }
    lo[static_cast<std::size_t>(d)] = static_cast<long long>(std::floor(a * ctx.N));
    hi[static_cast<std::size_t>(d)] = static_cast<long long>(std::ceil(b * ctx.N));
  }
  std::vector<long long> cur = lo;
  while (true) {
    Point g(dim);
    for (int d = 0; d < dim; ++d) g(d) = static_cast<double>(cur[static_cast<std::size_t>(d)]);
    if (contains(ctx.fam.lattice(), g / ctx.N)) {
      ++rc.lattice_points;
      if (ctx.index_of(g) == BergmanContext::npos) ++rc.missing;
    }
    int d = 0;
    while (d < dim && cur[static_cast<std::size_t>(d)] == hi[static_cast<std::size_t>(d)]) {
      cur[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
      ++d;
    }
    if (d == dim) break;
    ++cur[static_cast<std::size_t>(d)];
  }
  return rc;
}

}  // namespace polybern
