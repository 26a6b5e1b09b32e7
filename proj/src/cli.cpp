#include "polybern/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "polybern/approx.hpp"
#include "polybern/bergman.hpp"
#include "polybern/catalog.hpp"
#include "polybern/error.hpp"
#include "polybern/expansion.hpp"
#include "polybern/kernels.hpp"
#include "polybern/ldp.hpp"
#include "polybern/presets.hpp"
#include "polybern/smooth1d.hpp"
#include "polybern/spec_io.hpp"

#ifndef POLYBERN_VERSION
#define POLYBERN_VERSION "0.0.0"
#endif

namespace polybern::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string preset = "interval";
  std::string spec_path;
  std::string f;
  std::vector<int> N;
  int grid = 11;
  std::string out_path;
  std::uint64_t seed = 1;
  int threads = 0;
  double newton_tol = 1e-12;

  // expansion
  std::vector<double> x;
  std::vector<int> n = {1, 2};
  // rate
  std::vector<double> y;
  bool empirical = false;
  double radius = 0.02;
  std::uint64_t samples = 200000;
  std::string method = "auto";
  // smooth1d
  int n_grid = 4096;
  // bergman
  std::string grid_out;
  int order = 10;
};

ExpFamily load_family(const Options& o) {
  NewtonConfig cfg;
  cfg.tol = o.newton_tol;
  if (!o.spec_path.empty()) return make_family(load_polytope_spec(o.spec_path), cfg);
  return ExpFamily(preset(o.preset).support, cfg);
}

void check_N(const std::vector<int>& N) {
  if (N.empty()) throw Error(ErrorCode::Validation, "at least one N is required");
  for (int v : N)
    if (v < 1) throw Error(ErrorCode::Validation, "N values must be at least 1");
}

Exec exec_of(const Options& o) { return o.threads > 0 ? Exec::parallel : Exec::serial; }

Point as_point(const std::vector<double>& v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorCode::Validation, std::string(what) + " must have one coordinate per dimension");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
}

Point vertex_centroid(const ExpFamily& fam) {
  return face_centroid(fam.support(), fam.lattice(), fam.lattice().top_index());
}

// Box grid over the bounding box of S with `res` points per axis, kept if inside P.
std::vector<Point> box_grid(const ExpFamily& fam, int res) {
  if (res < 2) throw Error(ErrorCode::Validation, "grid resolution must be at least 2");
  const int m = fam.dim();
  Point lo = fam.support().points.front(), hi = lo;
  for (const auto& p : fam.support().points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<Point> out;
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    Point x(m);
    for (int d = 0; d < m; ++d) x(d) = lo(d) + idx[static_cast<std::size_t>(d)] * (hi(d) - lo(d)) / (res - 1);
    if (contains(fam.lattice(), x)) out.push_back(x);
    int d = m - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == res) idx[static_cast<std::size_t>(d--)] = 0;
    if (d < 0) break;
  }
  return out;
}

std::string point_header(const char* prefix, int m) {
  std::string h;
  for (int d = 1; d <= m; ++d) h += std::string(d > 1 ? "," : "") + prefix + std::to_string(d);
  return h;
}

std::string point_cells(const Point& x) {
  std::string s;
  for (Eigen::Index d = 0; d < x.size(); ++d) s += (d ? "," : "") + format_number(x(d));
  return s;
}

std::string config_hash(const CLI::App& sub) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(sub.get_name() + "\n" + sub.config_to_str(true, false))));
  return buf;
}

void run_approx(const Options& o, std::ostream& os) {
  const ExpFamily fam = load_family(o);
  const SmoothFunction f = make_function(o.f.empty() ? "z2" : o.f, fam.dim());
  std::vector<int> Ns = o.N.empty() ? std::vector<int>{2} : o.N;
  check_N(Ns);
  const auto grid = box_grid(fam, o.grid);
  os << point_header("x", fam.dim()) << ",N,BN,f,error\n";
  for (int N : Ns) {
    const auto values = bernstein_apply_many(fam, f.value, N, grid, exec_of(o));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double fx = f.value(grid[i]);
      os << point_cells(grid[i]) << ',' << N << ',' << format_number(values[i]) << ',' << format_number(fx) << ','
         << format_number(values[i] - fx) << '\n';
    }
  }
}

void run_expansion(const Options& o, std::ostream& os) {
  const ExpFamily fam = load_family(o);
  const SmoothFunction f = make_function(o.f.empty() ? "cos" : o.f, fam.dim());
  const Point x = o.x.empty() ? vertex_centroid(fam) : as_point(o.x, fam.dim(), "--x");
  std::vector<int> Ns = o.N.empty() ? std::vector<int>{8, 16, 32, 64} : o.N;
  check_N(Ns);
  os << "f," << point_header("x", fam.dim()) << ",n,N,remainder,slope\n";
  for (int n : o.n) {
    if (n < 1 || n > kMaxNu + 1) throw Error(ErrorCode::Validation, "--n values must lie in [1, 4]");
    const OrderEstimate est = order_estimate(fam, f, x, n, Ns, exec_of(o));
    for (std::size_t i = 0; i < Ns.size(); ++i)
      os << f.name << ',' << point_cells(x) << ',' << n << ',' << Ns[i] << ',' << format_number(est.remainder[i]) << ','
         << format_number(est.slope) << '\n';
  }
}

void run_rate(const Options& o, std::ostream& os) {
  const ExpFamily fam = load_family(o);
  const Point x = as_point(o.x, fam.dim(), "--x");
  const Point y = as_point(o.y, fam.dim(), "--y");
  const ExtendedReal closed = rate_closed(fam, x, y);
  const double legendre = closed.is_finite() ? rate_legendre(fam, x, y) : INFINITY;
  os << point_header("x", fam.dim()) << ',' << point_header("y", fam.dim()) << ",rate_closed,rate_legendre";
  if (o.empirical) os << ",empirical_slope";
  os << '\n' << point_cells(x) << ',' << point_cells(y) << ','
     << (closed.is_finite() ? format_number(closed.value()) : std::string("inf")) << ',' << format_number(legendre);
  if (o.empirical) {
    std::vector<int> Ns = o.N;
    if (Ns.empty())
      for (int N = 10; N <= 200; N += 10) Ns.push_back(N);
    check_N(Ns);
    DecayMethod method = DecayMethod::automatic;
    if (o.method == "exact")
      method = DecayMethod::exact_binomial;
    else if (o.method == "mc")
      method = DecayMethod::monte_carlo;
    else if (o.method != "auto")
      throw Error(ErrorCode::Validation, "--method must be auto, exact or mc");
    os << ',' << format_number(empirical_decay(fam, x, y, o.radius, Ns, o.samples, o.seed, method).slope);
  }
  os << '\n';
}

void run_smooth1d(const Options& o, std::ostream& os) {
  const SmoothFunction f = make_function(o.f.empty() ? "cos" : o.f, 1);
  std::vector<int> Ns = o.N.empty() ? std::vector<int>{4, 16} : o.N;
  check_N(Ns);
  const std::vector<double> xs = o.x.empty() ? std::vector<double>{0.25, 0.5, 0.75} : o.x;
  auto f1 = [&](double z) { return f.value(Point::Constant(1, z)); };
  os << "x,N,BN,f,N_times_error,half_A_f2\n";
  for (double x : xs) {
    const Point px = Point::Constant(1, x);
    const double fx = f1(x);
    const double lead = (x > 0.0 && x < 1.0) ? 0.5 * todd_variance(x) * *f.derivative(px, {2}) : 0.0;
    for (int N : Ns) {
      const double bn = smooth_bernstein_apply(f1, N, x, o.n_grid, {}, exec_of(o));
      os << format_number(x) << ',' << N << ',' << format_number(bn) << ',' << format_number(fx) << ','
         << format_number(N * (bn - fx)) << ',' << format_number(lead) << '\n';
    }
  }
}

void run_bergman(const Options& o, const CLI::App& sub, std::ostream& os) {
  const ExpFamily fam = load_family(o);
  const SmoothFunction f = make_function(o.f.empty() ? "z2" : o.f, fam.dim());
  const int N = o.N.empty() ? 3 : o.N.front();
  check_N({N});
  BergmanConfig cfg;
  cfg.order = o.order;
  cfg.check_order = std::max(1, o.order - 2);
  cfg.exec = exec_of(o);
  const BergmanContext ctx = build_bergman_context(fam, N, cfg);
  const BalancedReport rep = balanced_report(ctx);
  const RiemannCheck rc = riemann_identity_check(ctx, f.value);

  ordered_json j;
  j["version"] = version();
  j["config_hash"] = config_hash(sub);
  j["source"] = o.spec_path.empty() ? "preset:" + o.preset : o.spec_path;
  j["N"] = N;
  j["quadrature"] = {{"order", cfg.order}, {"check_order", cfg.check_order}, {"relative_error", ctx.quad_error}};
  const auto Q = ctx.norm_ratio();
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < ctx.gammas.size(); ++i) {
    std::vector<double> g(ctx.gammas[i].data(), ctx.gammas[i].data() + ctx.gammas[i].size());
    table.push_back({{"gamma", g}, {"path_weight", ctx.path_weights[i]}, {"R", ctx.R[i]}, {"Q", Q[i]}});
  }
  j["norming_constants"] = table;
  j["balance"] = {{"tol", kBalancedTol},           {"grid_points", rep.grid_points},
                  {"R_spread", rep.R_spread},      {"Pi_spread", rep.Pi_spread},
                  {"bary_defect", rep.bary_defect}, {"mass_defect", rep.mass_defect},
                  {"R_constant", rep.R_constant},  {"Pi_constant", rep.Pi_constant},
                  {"barycentric", rep.barycentric}, {"same_measure", rep.same_measure}};
  j["bbbary_residual"] = rep.bbbary_residual;
  j["riemann"] = {{"f", f.name},
                  {"lhs", rc.lhs},
                  {"rhs", rc.rhs},
                  {"abs_diff", std::abs(rc.lhs - rc.rhs)},
                  {"lattice_points", rc.lattice_points},
                  {"missing_from_S_N", rc.missing}};
  os << j.dump(2) << '\n';

  if (!o.grid_out.empty()) {
    std::ostringstream csv;
    csv << point_header("x", fam.dim()) << ",Pi_N\n";
    for (const Point& x : box_grid(fam, o.grid)) csv << point_cells(x) << ',' << format_number(bergman_kernel(ctx, x)) << '\n';
    std::ofstream file(o.grid_out, std::ios::binary);
    if (!file) throw Error(ErrorCode::Validation, "cannot write '" + o.grid_out + "'");
    file << csv.str();
  }
}

void run_presets(std::ostream& os) {
  os << "name,dim,points,description\n";
  for (const auto& p : presets())
    os << p.name << ',' << p.support.dim << ',' << p.support.size() << ",\"" << p.description << "\"\n";
}

void error_record(std::ostream& err, const std::string& name, int code, const std::string& message) {
  ordered_json j;
  j["error"] = name;
  j["code"] = code;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

const char* version() noexcept { return POLYBERN_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Bernstein measures and approximations on convex polytopes", "polybern"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  auto add_source = [&](CLI::App* s) {
    s->add_option("--preset", o.preset, "built-in polytope (see `presets`)");
    s->add_option("--spec", o.spec_path, "polytope-spec JSON file");
    s->add_option("--newton-tol", o.newton_tol, "moment-map inversion tolerance")->check(CLI::PositiveNumber);
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", o.out_path, "write output here instead of stdout");
    s->add_option("--threads", o.threads, "OpenMP threads for grid loops (0 = serial)")->check(CLI::NonNegativeNumber);
  };

  auto* approx = app.add_subcommand("approx", "B_N(f) on a grid");
  add_source(approx);
  add_common(approx);
  approx->add_option("--f", o.f, "catalog function");
  approx->add_option("--N", o.N, "degrees")->delimiter(',');
  approx->add_option("--grid", o.grid, "grid points per axis");

  auto* expansion = app.add_subcommand("expansion", "expansion remainders and fitted order");
  add_source(expansion);
  add_common(expansion);
  expansion->add_option("--f", o.f, "catalog function");
  expansion->add_option("--x", o.x, "evaluation point (default: vertex centroid)")->delimiter(',');
  expansion->add_option("--n", o.n, "expansion orders")->delimiter(',');
  expansion->add_option("--N", o.N, "degrees")->delimiter(',');

  auto* rate = app.add_subcommand("rate", "large-deviation rate I^x(y)");
  add_source(rate);
  add_common(rate);
  rate->add_option("--x", o.x, "start point")->delimiter(',')->required();
  rate->add_option("--y", o.y, "target point")->delimiter(',')->required();
  rate->add_flag("--empirical", o.empirical, "also fit the decay of ball probabilities");
  rate->add_option("--radius", o.radius, "ball radius")->check(CLI::PositiveNumber);
  rate->add_option("--N", o.N, "degrees for the decay fit")->delimiter(',');
  rate->add_option("--samples", o.samples, "Monte Carlo samples per N");
  rate->add_option("--seed", o.seed, "Monte Carlo seed");
  rate->add_option("--method", o.method, "auto | exact | mc");

  auto* smooth = app.add_subcommand("smooth1d", "Bernstein approximation for the smooth measure on [0,1]");
  add_common(smooth);
  smooth->add_option("--f", o.f, "catalog function");
  smooth->add_option("--x", o.x, "evaluation points")->delimiter(',');
  smooth->add_option("--N", o.N, "degrees")->delimiter(',');
  smooth->add_option("--n-grid", o.n_grid, "density grid points");

  auto* bergman = app.add_subcommand("bergman", "Bergman-Bernstein comparison report");
  add_source(bergman);
  add_common(bergman);
  bergman->add_option("--f", o.f, "catalog function for the Riemann identity");
  bergman->add_option("--N", o.N, "degree")->expected(1);
  bergman->add_option("--order", o.order, "Gauss points per direction")->check(CLI::Range(3, 40));
  bergman->add_option("--grid", o.grid, "grid points per axis for --grid-out");
  bergman->add_option("--grid-out", o.grid_out, "CSV file for Pi_N on a grid");

  auto* list = app.add_subcommand("presets", "list built-in polytopes");
  add_common(list);

  std::vector<const char*> argv{"polybern"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_record(err, "UsageError", 1, e.what());
    return 1;
  }

  try {
    if (o.threads > 0) kernels::parallel::set_threads(o.threads);
    std::ostringstream buffer;
    if (approx->parsed())
      run_approx(o, buffer);
    else if (expansion->parsed())
      run_expansion(o, buffer);
    else if (rate->parsed())
      run_rate(o, buffer);
    else if (smooth->parsed())
      run_smooth1d(o, buffer);
    else if (bergman->parsed())
      run_bergman(o, *bergman, buffer);
    else
      run_presets(buffer);

    if (o.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!file) throw Error(ErrorCode::Validation, "cannot write '" + o.out_path + "'");
      file << buffer.str();
    }
    return 0;
  } catch (const Error& e) {
    error_record(err, std::string(code_name(e.code())), exit_status(e.code()), e.what());
    return exit_status(e.code());
  } catch (const std::exception& e) {
    error_record(err, "InternalError", 1, e.what());
    return 1;
  }
}

}  // namespace polybern::cli
