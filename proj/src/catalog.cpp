#include "polybern/catalog.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polybern/error.hpp"

namespace polybern {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::Validation, "bad number '" + s + "' in function name");
  return v;
}

[[noreturn]] void unknown(const std::string& name) {
  throw Error(ErrorCode::Validation, "unknown catalog function '" + name + "'");
}

}  // namespace

SmoothFunction monomial(const MultiIndex& a) {
  std::ostringstream os;
  os << "mono:";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  SmoothFunction f;
  f.name = os.str();
  f.value = [a](const Point& z) {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(z(static_cast<Eigen::Index>(i)), a[i]);
    return v;
  };
  f.derivative = [a](const Point& z, const MultiIndex& d) -> std::optional<double> {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (d[i] > a[i]) return 0.0;
      for (int k = 0; k < d[i]; ++k) v *= a[i] - k;
      v *= std::pow(z(static_cast<Eigen::Index>(i)), a[i] - d[i]);
    }
    return v;
  };
  return f;
}

SmoothFunction cosine(double k, const Point& w) {
  std::ostringstream os;
  os.precision(17);
  os << "cos:" << k << ':';
  for (Eigen::Index i = 0; i < w.size(); ++i) os << (i ? "," : "") << w(i);
  SmoothFunction f;
  f.name = os.str();
  f.value = [k, w](const Point& z) { return std::cos(k * w.dot(z)); };
  f.derivative = [k, w](const Point& z, const MultiIndex& d) -> std::optional<double> {
    int n = 0;
    double scale = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      n += d[i];
      scale *= std::pow(k * w(static_cast<Eigen::Index>(i)), d[i]);
    }
    return scale * std::cos(k * w.dot(z) + n * std::numbers::pi / 2);
  };
  return f;
}

SmoothFunction make_function(const std::string& name, int dim) {
  if (dim < 1) throw Error(ErrorCode::Validation, "dimension must be positive");
  auto axis_power = [&](int axis, int p) {
    MultiIndex a(static_cast<std::size_t>(dim), 0);
    if (axis >= dim) unknown(name);
    a[static_cast<std::size_t>(axis)] = p;
    SmoothFunction f = monomial(a);
    f.name = name;
    return f;
  };
  if (name == "one") {
    SmoothFunction f = monomial(MultiIndex(static_cast<std::size_t>(dim), 0));
    f.name = name;
    return f;
  }
  if (name == "z") return axis_power(0, 1);
  if (name == "z2") return axis_power(0, 2);
  if (name == "z3") return axis_power(0, 3);
  if (name == "z4") return axis_power(0, 4);
  if (name == "x1") return axis_power(0, 1);
  if (name == "x2") return axis_power(1, 1);
  if (name == "x3") return axis_power(2, 1);
  if (name == "cos") {
    const double base[3] = {1.0, 0.7, 0.4};
    Point w = Point::Zero(dim);
    for (int i = 0; i < dim; ++i) w(i) = i < 3 ? base[i] : 0.0;
    SmoothFunction f = cosine(3.0, w);
    f.name = name;
    return f;
  }
  if (name.rfind("mono:", 0) == 0) {
    const auto parts = split(name.substr(5), ',');
    if (static_cast<int>(parts.size()) != dim) unknown(name);
    MultiIndex a;
    for (const auto& p : parts) {
      const double v = parse_number(p);
      if (v < 0 || v != std::floor(v) || v > 8) unknown(name);
      a.push_back(static_cast<int>(v));
    }
    return monomial(a);
  }
  if (name.rfind("cos:", 0) == 0) {
    const auto parts = split(name.substr(4), ':');
    if (parts.size() != 2) unknown(name);
    const double k = parse_number(parts[0]);
    const auto ws = split(parts[1], ',');
    if (static_cast<int>(ws.size()) != dim) unknown(name);
    Point w(dim);
    for (int i = 0; i < dim; ++i) w(i) = parse_number(ws[static_cast<std::size_t>(i)]);
    return cosine(k, w);
  }
  unknown(name);
}

std::vector<std::string> catalog_names() { return {"one", "z", "z2", "z3", "z4", "x1", "x2", "x3", "cos"}; }

}  // namespace polybern
