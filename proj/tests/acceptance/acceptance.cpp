// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
//
//   acceptance               run all criteria
//   acceptance --criterion 7 run one

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "../oracles.hpp"
#include "polybern/approx.hpp"
#include "polybern/bergman.hpp"
#include "polybern/catalog.hpp"
#include "polybern/expansion.hpp"
#include "polybern/ldp.hpp"
#include "polybern/presets.hpp"
#include "polybern/smooth1d.hpp"

using namespace polybern;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Report {
 public:
  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    va_list ap;
    va_start(ap, fmt);
    line(ok ? "[ok]  " : "[FAIL]", fmt, ap);
    va_end(ap);
    ok_ = ok_ && ok;
  }
  void info(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list ap;
    va_start(ap, fmt);
    line("[info]", fmt, ap);
    va_end(ap);
  }
  bool ok() const { return ok_; }

 private:
  static void line(const char* tag, const char* fmt, va_list ap) {
    std::printf("  %s ", tag);
    std::vprintf(fmt, ap);
    std::printf("\n");
  }
  bool ok_ = true;
};

ExpFamily family(const std::string& name) { return ExpFamily(preset(name).support); }

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) p(i++) = c;
  return p;
}

Point vertex_centroid(const ExpFamily& fam) {
  return face_centroid(fam.support(), fam.lattice(), fam.lattice().top_index());
}

std::vector<Point> vertices(const ExpFamily& fam) {
  std::vector<Point> out;
  for (std::size_t v : fam.lattice().vertices()) out.push_back(fam.support().points[fam.lattice().face(v).indices.front()]);
  return out;
}

// Interior samples: pulled toward the vertex centroid from each vertex, plus
// two asymmetric mixtures.
std::vector<Point> interior_samples(const ExpFamily& fam) {
  const Point c = vertex_centroid(fam);
  const auto vs = vertices(fam);
  std::vector<Point> out{c};
  for (const auto& v : vs) out.push_back(0.6 * c + 0.4 * v);
  if (vs.size() >= 2) {
    out.push_back(0.5 * c + 0.3 * vs[0] + 0.2 * vs[1]);
    out.push_back(0.7 * c + 0.05 * vs[0] + 0.25 * vs.back());
  }
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

// ---------------------------------------------------------------------------

void ac1(Report& r) {
  const auto t0 = Clock::now();
  const ExpFamily fam = family("interval");
  const SmoothFunction f = make_function("z2", 1);
  double worst = 0.0;
  for (int N = 1; N <= 64; ++N)
    for (double x : linspace(0.0, 1.0, 101)) {
      const double want = x * x + x * (1 - x) / N;
      worst = std::max(worst, std::abs(bernstein_apply(fam, f.value, N, pt({x})) - want));
    }
  const double dt = seconds_since(t0);
  r.check(worst <= 1e-12, "max |B_N(z^2) - x^2 - x(1-x)/N|, N = 1..64, 101 points: %.3e (tol 1e-12)", worst);
  r.check(dt < 1.0, "runtime %.3f s (limit 1 s)", dt);
}

void ac2(Report& r) {
  const std::vector<int> Ns{1, 2, 3, 5, 8, 16, 32};
  for (const char* name : {"interval", "simplex2", "square"}) {
    const ExpFamily fam = family(name);
    std::size_t checks = 0, exact = 0;
    for (const auto& fname : catalog_names()) {
      if ((fname == "x2" && fam.dim() < 2) || (fname == "x3" && fam.dim() < 3)) continue;
      const SmoothFunction f = make_function(fname, fam.dim());
      for (const Point& v : vertices(fam))
        for (int N : Ns) {
          ++checks;
          if (bernstein_apply(fam, f.value, N, v) == f.value(v)) ++exact;
        }
    }
    r.check(exact == checks, "%s: B_N(f)(v) == f(v) bitwise in %zu of %zu (f, vertex, N) cases", name, exact, checks);
  }
}

void ac3(Report& r) {
  const auto t0 = Clock::now();
  const std::vector<int> Ns{8, 16, 32, 64};
  for (const auto& p : presets()) {
    const ExpFamily fam(p.support);
    const SmoothFunction f = make_function("cos", fam.dim());
    const Point x = vertex_centroid(fam);
    for (int n : {1, 2}) {
      const OrderEstimate est = order_estimate(fam, f, x, n, Ns, Exec::parallel);
      r.check(std::abs(est.slope + n) <= 0.15, "%s at vertex centroid, n = %d: slope %.4f (want %d +- 0.15)",
              p.name.c_str(), n, est.slope, -n);
    }
  }
  const double dt = seconds_since(t0);
  r.check(dt < 30.0, "runtime %.2f s (limit 30 s)", dt);
}

void ac4(Report& r) {
  for (const char* name : {"interval", "simplex2", "square", "weighted-interval", "weighted-simplex2", "segment3",
                           "square-centered", "cube"}) {
    const ExpFamily fam = family(name);
    const int m = fam.dim();
    double worst = 0.0;
    for (const auto& fname : {"cos", "z2", "z4", "cos:2:0.3,-1.1,0.5"}) {
      std::string fn = fname;
      if (fn.rfind("cos:", 0) == 0) {
        fn = "cos:2:";
        const char* ws[] = {"0.3", "-1.1", "0.5"};
        for (int i = 0; i < m; ++i) fn += std::string(i ? "," : "") + ws[i];
      }
      const SmoothFunction f = make_function(fn, m);
      for (const Point& x : interior_samples(fam)) {
        const ExpansionTable t = build_expansion_table(fam, x, 1);
        const double op = apply_operator(t, 1, f);
        const Eigen::MatrixXd A = moment_matrices(fam, x).A;
        double ref = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            MultiIndex a(static_cast<std::size_t>(m), 0);
            ++a[static_cast<std::size_t>(i)];
            ++a[static_cast<std::size_t>(j)];
            ref += 0.5 * A(i, j) * *f.derivative(x, a);
          }
        worst = std::max(worst, std::abs(op - ref) / std::max(1.0, std::abs(ref)));
      }
    }
    r.check(worst <= 1e-10, "%s: max |L_1 f - Tr(A Hess f)/2| = %.3e (tol 1e-10)", name, worst);
  }
}

void ac5(Report& r) {
  for (const char* name :
       {"interval", "simplex2", "square", "weighted-interval", "weighted-simplex2", "segment3", "square-centered"}) {
    const ExpFamily fam = family(name);
    const int m = fam.dim();
    double worst = 0.0;
    std::size_t cases = 0;
    for (const Point& x : interior_samples(fam)) {
      const CumulantTable kappa = single_step_cumulants(fam, x, 6);
      const double scale = moment_matrices(fam, x).A.trace() / m;
      std::vector<ConvolutionPower> cps;
      for (int N = 1; N <= 4; ++N) cps.push_back(convolution_power(fam, x, N));
      for (int k = 2; k <= 6; ++k)
        for (const auto& alpha : multi_indices(m, k)) {
          const auto p = expansion_coefficients(kappa, alpha);
          std::vector<double> vals;
          for (std::size_t N = 1; N <= p.size(); ++N) vals.push_back(central_moment_direct(cps[N - 1], x, alpha));
          const auto q = oracle::interpolate_in_N(vals);
          double pmax = 0.0;
          for (double v : p) pmax = std::max(pmax, std::abs(v));
          const double denom = std::max(pmax, std::pow(scale, 0.5 * k));
          for (std::size_t l = 0; l < p.size(); ++l) worst = std::max(worst, std::abs(p[l] - q[l]) / denom);
          ++cases;
        }
    }
    r.check(worst <= 1e-9, "%s: max rel |p_partition - p_interpolated| over %zu (x, alpha) = %.3e (tol 1e-9)", name,
            cases, worst);
  }
}

void ac6(Report& r) {
  for (const char* name : {"interval", "simplex2", "square"}) {
    const ExpFamily fam = family(name);
    const int m = fam.dim();
    double worst = 0.0;
    std::size_t cases = 0;
    for (const Point& x : interior_samples(fam)) {
      if (boundary_distance(fam.lattice(), x) < 0.05) continue;
      for (int k = 0; k <= 3; ++k)
        for (const auto& alpha : multi_indices(m, k))
          for (int j = 0; j < m; ++j)
            for (int N = 1; N <= 8; ++N) {
              worst = std::max(worst, recursion_check(fam, x, alpha, j, N));
              ++cases;
            }
    }
    r.check(worst <= 1e-5, "%s: max recursion residual over %zu cases (|alpha| <= 3, N <= 8) = %.3e (tol 1e-5)", name,
            cases, worst);
  }
}

void ac7(Report& r) {
  for (const auto& p : presets()) {
    const ExpFamily fam(p.support);
    const auto pts = interior_samples(fam);
    double worst = 0.0;
    for (const Point& x : pts)
      for (const Point& y : pts) worst = std::max(worst, std::abs(rate_closed(fam, x, y).value() - rate_legendre(fam, x, y)));
    r.check(worst <= 1e-8, "%s: max |rate_closed - rate_legendre| over %zu pairs = %.3e (tol 1e-8)", p.name.c_str(),
            pts.size() * pts.size(), worst);
  }

  const ExpFamily interval = family("interval");
  double worst_kl = 0.0;
  for (double x : linspace(0.05, 0.95, 19))
    for (double y : linspace(0.0, 1.0, 21))
      worst_kl = std::max(worst_kl, std::abs(rate_closed(interval, pt({x}), pt({y})).value() - oracle::kl_bernoulli(y, x)));
  r.check(worst_kl <= 1e-10, "interval: max |rate_closed - KL(y||x)| on 19 x 21 grid = %.3e (tol 1e-10)", worst_kl);

  std::vector<int> Ns;
  for (int N = 10; N <= 200; N += 10) Ns.push_back(N);
  const DecayEstimate est = empirical_decay(interval, pt({0.3}), pt({0.6}), 0.02, Ns, 0, 0, DecayMethod::exact_binomial);
  const double kl = oracle::kl_bernoulli(0.6, 0.3);
  const double rel = (est.slope - kl) / kl;
  r.check(std::abs(rel) <= 0.10, "exact binomial decay slope, x = 0.3, y = 0.6, radius 0.02, N = 10..200: %.6f vs KL %.6f (%+.2f%%, tol 10%%)",
          est.slope, kl, 100 * rel);
  const double edge = oracle::kl_bernoulli(0.58, 0.3);
  r.info("same slope vs the ball's nearest point rate KL(0.58||0.3) = %.6f: %+.2f%%", edge, 100 * (est.slope - edge) / edge);
}

void ac8(Report& r) {
  const auto t0 = Clock::now();
  double worst_mass = 0.0, worst_mean = 0.0;
  for (double x : linspace(0.05, 0.95, 19)) {
    const ToddMoments mo = todd_moments(x);
    worst_mass = std::max(worst_mass, std::abs(mo.mass - 1.0));
    worst_mean = std::max(worst_mean, std::abs(mo.mean - x));
  }
  r.check(worst_mass <= 1e-8, "Gauss-Legendre normalization, 19 points: max |mass - 1| = %.3e (tol 1e-8)", worst_mass);
  r.check(worst_mean <= 1e-8, "Gauss-Legendre barycenter, 19 points: max |mean - x| = %.3e (tol 1e-8)", worst_mean);

  double worst_grad = 0.0;
  const double h = 1e-5;
  for (double x : linspace(0.1, 0.9, 9))
    for (double z : linspace(0.0, 1.0, 5)) {
      const double fd = (std::log(todd_density(z, x + h)) - std::log(todd_density(z, x - h))) / (2 * h);
      const double want = todd_defining_function(x) * (z - x);
      worst_grad = std::max(worst_grad, std::abs(fd - want) / std::max(1.0, std::abs(want)));
    }
  r.check(worst_grad <= 1e-4, "gradient law d/dx log rho = K(x)(z - x): max rel err = %.3e (tol 1e-4)", worst_grad);

  const SmoothFunction f = make_function("cos", 1);
  auto f1 = [&](double z) { return f.value(pt({z})); };
  for (double x : {0.3, 0.7}) {
    const double bn = smooth_bernstein_apply(f1, 64, x, 4096);
    const double lhs = 64 * (bn - f1(x));
    const double rhs = 0.5 * todd_variance(x) * *f.derivative(pt({x}), {2});
    const double rel = std::abs(lhs - rhs) / std::abs(rhs);
    r.check(rel <= 0.05, "x = %.2f, f = cos(3z), N = 64, grid 4096: N(B_N f - f) = %.6f vs A f''/2 = %.6f (%.2f%%, tol 5%%)",
            x, lhs, rhs, 100 * rel);
  }
  const double dt = seconds_since(t0);
  r.check(dt < 60.0, "runtime %.1f s (limit 60 s)", dt);
}

void ac9(Report& r) {
  for (const char* name : {"interval", "simplex2", "square"}) {
    const ExpFamily fam = family(name);
    double spread = 0.0, bb = 0.0;
    bool all = true;
    for (int N : {1, 2, 3, 4, 6, 8}) {
      const BergmanContext ctx = build_bergman_context(fam, N);
      const BalancedReport rep = balanced_report(ctx);
      spread = std::max(spread, rep.R_spread);
      bb = std::max(bb, rep.bbbary_residual);
      all = all && rep.R_constant && rep.Pi_constant && rep.barycentric && rep.same_measure;
    }
    r.check(spread <= 1e-7 && all, "%s, N in {1,2,3,4,6,8}: max R spread %.3e (tol 1e-7), four flags true: %s", name,
            spread, all ? "yes" : "no");
    r.check(bb <= 1e-5, "%s: barycenter-defect identity residual %.3e (tol 1e-5)", name, bb);
  }

  {
    const ExpFamily fam = family("weighted-interval");
    for (int N : {2, 4, 8}) {
      const BergmanContext ctx = build_bergman_context(fam, N);
      const BalancedReport rep = balanced_report(ctx);
      const bool none = !rep.R_constant && !rep.Pi_constant && !rep.barycentric && !rep.same_measure;
      r.check(none, "weighted-interval c = (1,2), N = %d: flags R=%d Pi=%d bary=%d same=%d (want all 0); R spread %.3e", N,
              rep.R_constant, rep.Pi_constant, rep.barycentric, rep.same_measure, rep.R_spread);
      r.check(rep.bbbary_residual <= 1e-5, "weighted-interval, N = %d: barycenter-defect residual %.3e (tol 1e-5)", N,
              rep.bbbary_residual);
    }
  }

  {
    const ExpFamily fam = family("segment3");
    const BergmanContext ctx = build_bergman_context(fam, 4);
    const BalancedReport rep = balanced_report(ctx);
    double qmin = INFINITY;
    for (double q : ctx.norm_ratio()) qmin = std::min(qmin, q);
    r.info("segment3 {0,1,2}, N = 4: flags R=%d Pi=%d bary=%d same=%d, R spread %.3e, residual %.3e, min Q %.3e",
           rep.R_constant, rep.Pi_constant, rep.barycentric, rep.same_measure, rep.R_spread, rep.bbbary_residual, qmin);
  }

  for (const char* name : {"interval", "simplex2", "square", "weighted-interval"}) {
    const ExpFamily fam = family(name);
    double worst = 0.0;
    std::size_t missing = 0;
    bool q_positive = true;
    for (int N = 1; N <= 8; ++N) {
      const BergmanContext ctx = build_bergman_context(fam, N);
      for (double q : ctx.norm_ratio()) q_positive = q_positive && q > 0.0;
      for (const char* fname : {"one", "z2", "cos"}) {
        const RiemannCheck rc = riemann_identity_check(ctx, make_function(fname, fam.dim()).value);
        worst = std::max(worst, std::abs(rc.lhs - rc.rhs));
        missing += rc.missing;
      }
    }
    r.check(worst <= 1e-8 && q_positive,
            "%s, N = 1..8, f in {one, z2, cos}: max |lhs - rhs| = %.3e (tol 1e-8); lattice points missing from S_N: %zu; Q > 0: %s",
            name, worst, missing, q_positive ? "yes" : "no");
  }
}

void ac10(Report& r) {
  const auto& base = preset("simplex2").support;
  std::vector<WeightedSupport> variants(3, base);
  variants[1].weights = {1.0, 2.0, 3.0};
  variants[2].weights = {0.3, 5.0, 1.7};
  std::vector<ExpFamily> fams;
  for (const auto& s : variants) fams.emplace_back(s);
  double worst = 0.0;
  std::size_t points = 0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; i + j <= 20; ++j) {
      const Point x = pt({i / 20.0, j / 20.0});
      const auto ref = measure_at(fams[0], x).masses;
      for (std::size_t k = 1; k < fams.size(); ++k) {
        const auto other = measure_at(fams[k], x).masses;
        for (std::size_t a = 0; a < ref.size(); ++a) worst = std::max(worst, std::abs(ref[a] - other[a]));
      }
      ++points;
    }
  r.check(worst <= 1e-10, "standard 2-simplex, weights (1,1,1), (1,2,3), (0.3,5,1.7) on %zu grid points: max mass difference %.3e (tol 1e-10)",
          points, worst);
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Report&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run only this criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "classical identity B_N(z^2) on the interval", ac1},
      {2, "vertex interpolation", ac2},
      {3, "expansion order of the remainder", ac3},
      {4, "L_1 closed form", ac4},
      {5, "expansion coefficients vs interpolation oracle", ac5},
      {6, "central-moment recursion residual", ac6},
      {7, "rate-function agreement and decay", ac7},
      {8, "smooth measure on [0,1]", ac8},
      {9, "Bergman balance and Riemann identity", ac9},
      {10, "weight invariance on the simplex", ac10},
  };

  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    std::printf("AC%02d %s\n", c.id, c.title);
    Report rep;
    const auto t0 = Clock::now();
    try {
      c.body(rep);
    } catch (const std::exception& e) {
      rep.check(false, "exception: %s", e.what());
    }
    std::printf("AC%02d %s (%.2f s)\n\n", c.id, rep.ok() ? "PASS" : "FAIL", seconds_since(t0));
    std::fflush(stdout);
    ok = ok && rep.ok();
  }
  return ok ? 0 : 1;
}
