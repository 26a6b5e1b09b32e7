#include "polybern/presets.hpp"

#include "polybern/error.hpp"

namespace polybern {

namespace {

WeightedSupport make(int dim, std::vector<std::vector<double>> pts, std::vector<double> w = {}) {
  WeightedSupport s;
  s.dim = dim;
  for (const auto& p : pts) s.points.push_back(Eigen::Map<const Eigen::VectorXd>(p.data(), dim));
  s.weights = w.empty() ? std::vector<double>(pts.size(), 1.0) : std::move(w);
  return s;
}

std::vector<Preset> build() {
  return {
      {"interval", "[0,1] with S = {0,1}, unit weights: classical Bernstein polynomials",
       make(1, {{0}, {1}})},
      {"simplex2", "standard 2-simplex, S = vertices, unit weights: multinomial Bernstein basis",
       make(2, {{0, 0}, {1, 0}, {0, 1}})},
      {"square", "unit square, S = vertices, unit weights: tensor product of two intervals",
       make(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}})},
      {"cube", "unit cube, S = vertices, unit weights: tensor product of three intervals",
       make(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}})},
      {"weighted-interval", "[0,1] with S = {0,1}, c = (1,2)", make(1, {{0}, {1}}, {1.0, 2.0})},
      {"weighted-simplex2", "standard 2-simplex, c = (1,2,3)", make(2, {{0, 0}, {1, 0}, {0, 1}}, {1.0, 2.0, 3.0})},
      {"segment3", "[0,2] with S = {0,1,2}, unit weights", make(1, {{0}, {1}, {2}})},
      {"square-centered", "unit square, S = vertices plus (1/2,1/2), unit weights",
       make(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}})},
  };
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& preset(const std::string& name) {
  const std::string key = name == "triangle" ? "simplex2" : name;
  for (const auto& p : presets())
    if (p.name == key) return p;
  throw Error(ErrorCode::Validation, "unknown preset '" + name + "'");
}

}  // namespace polybern
