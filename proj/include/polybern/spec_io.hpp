#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polybern/measure.hpp"

namespace polybern {

/// Contents of a polytope-spec JSON file:
///   { "dim": m, "points": [[...], ...], "weights": [...],
///     "faces": [{ "indices": [...], "normal": [...], "offset": r }, ...] }
/// "weights" defaults to all ones; "faces" is required when m > 3.
struct PolytopeSpec {
  WeightedSupport support;
  std::optional<std::vector<FacetSpec>> faces;
};

/// Throws SpecParse on malformed JSON or missing fields, Validation on bad values.
PolytopeSpec parse_polytope_spec(const std::string& json_text);
PolytopeSpec load_polytope_spec(const std::string& path);

ExpFamily make_family(const PolytopeSpec& spec, NewtonConfig cfg = {});

}  // namespace polybern
