#include "polybern/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polybern/error.hpp"

namespace polybern {

namespace {

[[noreturn]] void blowup(std::size_t projected, std::size_t cap) {
  std::ostringstream os;
  os << "convolution support would reach " << projected << " atoms (cap " << cap << ")";
  throw Error(ErrorCode::AtomBlowup, os.str());
}

bool all_integral(const std::vector<Point>& pts) {
  for (const auto& p : pts)
    for (Eigen::Index k = 0; k < p.size(); ++k)
      if (std::abs(p(k) - std::round(p(k))) > 1e-12) return false;
  return true;
}

ConvolutionPower convolve_lattice(const std::vector<Point>& pts, const std::vector<double>& w, int N,
                                  const ConvolutionConfig& cfg) {
  const Eigen::Index m = pts.front().size();
  std::vector<std::int64_t> lo(m, INT64_MAX), hi(m, INT64_MIN);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(w[i] > 0.0)) continue;
    for (Eigen::Index d = 0; d < m; ++d) {
      const auto v = static_cast<std::int64_t>(std::llround(pts[i](d)));
      lo[d] = std::min(lo[d], v);
      hi[d] = std::max(hi[d], v);
    }
  }
  double projected = 1.0;
  for (Eigen::Index d = 0; d < m; ++d) projected *= static_cast<double>(N) * static_cast<double>(hi[d] - lo[d]) + 1.0;
  if (projected > static_cast<double>(cfg.max_atoms)) blowup(static_cast<std::size_t>(projected), cfg.max_atoms);

  std::vector<kernels::LatticeShift> shifts, unit;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(w[i] > 0.0)) continue;
    kernels::LatticeShift s;
    s.offset.resize(m);
    for (Eigen::Index d = 0; d < m; ++d) s.offset[d] = std::llround(pts[i](d)) - lo[d];
    s.weight = w[i];
    shifts.push_back(s);
    s.weight = 1.0;
    unit.push_back(std::move(s));
  }

  kernels::LatticeGrid mass{std::vector<std::int64_t>(m, 1), {1.0}};
  kernels::LatticeGrid reach = mass;
  for (int step = 0; step < N; ++step) {
    mass = kernels::lattice_convolve(cfg.exec, mass, shifts);
    reach = kernels::lattice_convolve(cfg.exec, reach, unit);
  }

  ConvolutionPower out;
  out.N = N;
  std::vector<std::int64_t> coord(m);
  for (std::size_t k = 0; k < mass.cells(); ++k) {
    if (!(reach.values[k] > 0.0)) continue;
    std::size_t rem = k;
    for (Eigen::Index d = m; d-- > 0;) {
      coord[d] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(mass.shape[d]));
      rem /= static_cast<std::size_t>(mass.shape[d]);
    }
    Point g(m);
    for (Eigen::Index d = 0; d < m; ++d) g(d) = static_cast<double>(coord[d] + N * lo[d]);
    out.gammas.push_back(g);
    out.atoms.push_back(g / N);
    out.masses.push_back(mass.values[k]);
  }
  return out;
}

ConvolutionPower convolve_scattered(const std::vector<Point>& pts, const std::vector<double>& w, int N,
                                    const ConvolutionConfig& cfg) {
  constexpr double kQuantum = 1e-12;
  using Key = std::vector<long long>;
  struct Cell {
    Point gamma;
    double mass;
  };
  const Eigen::Index m = pts.front().size();
  auto key_of = [&](const Point& p) {
    Key k(m);
    for (Eigen::Index d = 0; d < m; ++d) k[d] = std::llround(p(d) / kQuantum);
    return k;
  };

  std::map<Key, Cell> cur;
  cur.emplace(Key(m, 0), Cell{Point::Zero(m), 1.0});
  for (int step = 0; step < N; ++step) {
    std::map<Key, Cell> next;
    for (const auto& [k, cell] : cur)
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(w[i] > 0.0)) continue;
        const Point g = cell.gamma + pts[i];
        auto [it, fresh] = next.try_emplace(key_of(g), Cell{g, 0.0});
        it->second.mass += cell.mass * w[i];
        if (fresh && next.size() > cfg.max_atoms) blowup(next.size(), cfg.max_atoms);
      }
    cur = std::move(next);
  }

  ConvolutionPower out;
  out.N = N;
  for (auto& [k, cell] : cur) {
    out.atoms.push_back(cell.gamma / N);
    out.gammas.push_back(std::move(cell.gamma));
    out.masses.push_back(cell.mass);
  }
  return out;
}

double power_of(const Point& c, const MultiIndex& alpha) {
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int e = 0; e < alpha[i]; ++e) v *= c(static_cast<Eigen::Index>(i));
  return v;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Visit every gamma <= e componentwise.
template <class F>
void for_each_below(const MultiIndex& e, F&& fn) {
  MultiIndex g(e.size(), 0);
  while (true) {
    fn(static_cast<const MultiIndex&>(g));
    std::size_t i = 0;
    while (i < g.size() && g[i] == e[i]) g[i++] = 0;
    if (i == g.size()) return;
    ++g[i];
  }
}

std::size_t first_nonzero(const MultiIndex& b) {
  std::size_t j = 0;
  while (b[j] == 0) ++j;
  return j;
}

MultiIndex minus(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double multiplicity(const MultiIndex& e, const MultiIndex& g) {
  double r = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) r *= binom(e[i], g[i]);
  return r;
}

struct PartitionSum {
  const CumulantTable& kappa;
  std::map<std::pair<MultiIndex, int>, double> memo;

  // Sum over set partitions of the items of beta into l blocks of size >= 2
  // of the product of block cumulants.
  double operator()(const MultiIndex& beta, int l) {
    const int n = order(beta);
    if (n == 0) return l == 0 ? 1.0 : 0.0;
    if (l <= 0 || 2 * l > n) return 0.0;
    auto key = std::make_pair(beta, l);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t j = first_nonzero(beta);
    MultiIndex e = beta;
    --e[j];
    double total = 0.0;
    for_each_below(e, [&](const MultiIndex& g) {
      if (order(g) < 1) return;
      MultiIndex block = g;
      ++block[j];
      const double k = kappa.at(block);
      if (k == 0.0) return;
      total += multiplicity(e, g) * k * (*this)(minus(e, g), l - 1);
    });
    memo.emplace(std::move(key), total);
    return total;
  }
};

}  // namespace

int order(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

std::vector<MultiIndex> multi_indices(int m, int k) {
  std::vector<MultiIndex> out;
  MultiIndex cur(m, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (m > 0) rec(0, k);
  return out;
}

ConvolutionPower convolve_weights(const std::vector<Point>& points, const std::vector<double>& weights,
                                  int N, const ConvolutionConfig& cfg) {
  if (N < 1) throw Error(ErrorCode::Validation, "N must be at least 1");
  if (points.empty() || points.size() != weights.size())
    throw Error(ErrorCode::Validation, "convolution needs one weight per point");
  if (std::none_of(weights.begin(), weights.end(), [](double v) { return v > 0.0; }))
    throw Error(ErrorCode::Validation, "convolution needs a positive weight");
  return all_integral(points) ? convolve_lattice(points, weights, N, cfg)
                              : convolve_scattered(points, weights, N, cfg);
}

ConvolutionPower convolution_power(const ExpFamily& fam, const Point& x, int N,
                                   const ConvolutionConfig& cfg) {
  const DiscreteMeasure b = measure_at(fam, x);
  return convolve_weights(b.atoms, b.masses, N, cfg);
}

double bernstein_apply(const ExpFamily& fam, const ScalarFn& f, int N, const Point& x,
                       const ConvolutionConfig& cfg) {
  const ConvolutionPower cp = convolution_power(fam, x, N, cfg);
  double acc = 0.0;
  for (std::size_t i = 0; i < cp.atoms.size(); ++i)
    if (cp.masses[i] != 0.0) acc += cp.masses[i] * f(cp.atoms[i]);
  return acc;
}

std::vector<double> bernstein_apply_many(const ExpFamily& fam, const ScalarFn& f, int N,
                                         const std::vector<Point>& xs, Exec exec) {
  std::vector<double> out(xs.size());
  kernels::for_each_index(exec, xs.size(),
                          [&](std::size_t i) { out[i] = bernstein_apply(fam, f, N, xs[i]); });
  return out;
}

double central_moment_direct(const ConvolutionPower& cp, const Point& x, const MultiIndex& alpha) {
  const int k = order(alpha);
  if (k == 0) return 1.0;
  if (k == 1) return 0.0;
  const Point nx = static_cast<double>(cp.N) * x;
  double acc = 0.0;
  for (std::size_t i = 0; i < cp.gammas.size(); ++i)
    if (cp.masses[i] != 0.0) acc += cp.masses[i] * power_of(cp.gammas[i] - nx, alpha);
  return acc;
}

double central_moment_direct(const ExpFamily& fam, const Point& x, const MultiIndex& alpha, int N,
                             const ConvolutionConfig& cfg) {
  if (static_cast<int>(alpha.size()) != fam.dim())
    throw Error(ErrorCode::Validation, "multi-index has wrong length");
  if (order(alpha) <= 1) return order(alpha) == 0 ? 1.0 : 0.0;
  return central_moment_direct(convolution_power(fam, x, N, cfg), x, alpha);
}

CumulantTable single_step_cumulants(const ExpFamily& fam, const Point& x, int max_order) {
  if (max_order < 1 || max_order > kMaxMultiIndexOrder)
    throw Error(ErrorCode::Validation, "cumulant order must lie in [1, 8]");
  const int m = fam.dim();
  const DiscreteMeasure b = measure_at(fam, x);

  std::map<MultiIndex, double> moment;
  moment[MultiIndex(m, 0)] = 1.0;
  for (int k = 1; k <= max_order; ++k)
    for (const auto& beta : multi_indices(m, k)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < b.atoms.size(); ++i)
        if (b.masses[i] != 0.0) acc += b.masses[i] * power_of(b.atoms[i] - x, beta);
      moment[beta] = acc;
    }

  CumulantTable kappa;
  for (int k = 1; k <= max_order; ++k)
    for (const auto& beta : multi_indices(m, k)) {
      if (k == 1) {
        kappa[beta] = 0.0;
        continue;
      }
      const std::size_t j = first_nonzero(beta);
      MultiIndex e = beta;
      --e[j];
      double acc = moment.at(beta);
      for_each_below(e, [&](const MultiIndex& g) {
        if (g == e) return;
        MultiIndex block = g;
        ++block[j];
        acc -= multiplicity(e, g) * kappa.at(block) * moment.at(minus(e, g));
      });
      kappa[beta] = acc;
    }
  return kappa;
}

std::vector<double> expansion_coefficients(const CumulantTable& kappa, const MultiIndex& alpha) {
  const int n = order(alpha);
  if (n > kMaxMultiIndexOrder) throw Error(ErrorCode::Validation, "multi-index order above 8");
  PartitionSum sum{kappa, {}};
  std::vector<double> p(static_cast<std::size_t>(n / 2 + 1), 0.0);
  for (int l = 0; l <= n / 2; ++l) p[static_cast<std::size_t>(l)] = sum(alpha, l);
  return p;
}

std::vector<double> expansion_coefficients(const ExpFamily& fam, const Point& x, const MultiIndex& alpha) {
  if (static_cast<int>(alpha.size()) != fam.dim())
    throw Error(ErrorCode::Validation, "multi-index has wrong length");
  const int n = order(alpha);
  if (n < 2) return expansion_coefficients(CumulantTable{}, alpha);
  return expansion_coefficients(single_step_cumulants(fam, x, n), alpha);
}

double recursion_check(const ExpFamily& fam, const Point& x, const MultiIndex& alpha, int j, int N,
                       double h) {
  const int m = fam.dim();
  if (static_cast<int>(alpha.size()) != m || j < 0 || j >= m)
    throw Error(ErrorCode::Validation, "bad multi-index or axis");
  auto with = [&](MultiIndex a, int i, int delta) {
    a[static_cast<std::size_t>(i)] += delta;
    return a;
  };
  const ConvolutionPower cp = convolution_power(fam, x, N);
  auto I = [&](const MultiIndex& a) { return central_moment_direct(cp, x, a); };

  Eigen::VectorXd grad(m);
  for (int k = 0; k < m; ++k) {
    Point xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    grad(k) = (central_moment_direct(fam, xp, alpha, N) - central_moment_direct(fam, xm, alpha, N)) / (2 * h);
  }
  const Eigen::MatrixXd A = moment_matrices(fam, x).A;
  double rhs = (A * grad)(j);
  for (int i = 0; i < m; ++i)
    if (alpha[static_cast<std::size_t>(i)] > 0)
      rhs += alpha[static_cast<std::size_t>(i)] * I(with(alpha, i, -1)) * I(with(with(MultiIndex(m, 0), i, 1), j, 1));
  return std::abs(I(with(alpha, j, 1)) - rhs);
}

}  // namespace polybern
