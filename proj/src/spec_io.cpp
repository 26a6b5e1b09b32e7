#include "polybern/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "polybern/error.hpp"

namespace polybern {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::SpecParse, what); }

Point read_vector(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) parse_error(where + " must be an array");
  if (static_cast<int>(j.size()) != dim) throw Error(ErrorCode::Validation, where + " has wrong length");
  Point p(dim);
  for (int k = 0; k < dim; ++k) {
    if (!j[static_cast<std::size_t>(k)].is_number()) parse_error(where + " must hold numbers");
    p(k) = j[static_cast<std::size_t>(k)].get<double>();
  }
  return p;
}

}  // namespace

PolytopeSpec parse_polytope_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_error("spec must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) parse_error("\"dim\" must be an integer");
  if (!doc.contains("points") || !doc["points"].is_array()) parse_error("\"points\" must be an array");

  PolytopeSpec spec;
  auto& s = spec.support;
  s.dim = doc["dim"].get<int>();
  if (s.dim < 1) throw Error(ErrorCode::Validation, "\"dim\" must be positive");
  for (std::size_t i = 0; i < doc["points"].size(); ++i)
    s.points.push_back(read_vector(doc["points"][i], s.dim, "points[" + std::to_string(i) + "]"));

  if (doc.contains("weights")) {
    const auto& w = doc["weights"];
    if (!w.is_array()) parse_error("\"weights\" must be an array");
    for (const auto& v : w) {
      if (!v.is_number()) parse_error("\"weights\" must hold numbers");
      s.weights.push_back(v.get<double>());
    }
  } else {
    s.weights.assign(s.points.size(), 1.0);
  }

  if (doc.contains("faces")) {
    const auto& fs = doc["faces"];
    if (!fs.is_array()) parse_error("\"faces\" must be an array");
    std::vector<FacetSpec> faces;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto& f = fs[i];
      const std::string where = "faces[" + std::to_string(i) + "]";
      if (!f.is_object() || !f.contains("normal") || !f.contains("offset") || !f["offset"].is_number())
        parse_error(where + " needs \"normal\" and numeric \"offset\"");
      FacetSpec spec_face;
      spec_face.normal = read_vector(f["normal"], s.dim, where + ".normal");
      spec_face.offset = f["offset"].get<double>();
      if (f.contains("indices")) {
        if (!f["indices"].is_array()) parse_error(where + ".indices must be an array");
        for (const auto& v : f["indices"]) {
          if (!v.is_number_unsigned()) parse_error(where + ".indices must hold non-negative integers");
          const auto idx = v.get<std::size_t>();
          if (idx >= s.points.size()) throw Error(ErrorCode::Validation, where + ".indices out of range");
          spec_face.indices.push_back(idx);
        }
      }
      faces.push_back(std::move(spec_face));
    }
    spec.faces = std::move(faces);
  }
  validate(s);
  return spec;
}

PolytopeSpec load_polytope_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SpecParse, "cannot open spec file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_polytope_spec(os.str());
}

ExpFamily make_family(const PolytopeSpec& spec, NewtonConfig cfg) {
  if (spec.faces) return ExpFamily(spec.support, build_face_lattice(spec.support, *spec.faces), cfg);
  return ExpFamily(spec.support, cfg);
}

}  // namespace polybern
