#include "polybern/error.hpp"

namespace polybern {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SpecParse: return "SpecParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::OutsidePolytope: return "OutsidePolytope";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AtomBlowup: return "AtomBlowup";
    case ErrorCode::MissingDerivative: return "MissingDerivative";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InsufficientHits: return "InsufficientHits";
  }
  return "Unknown";
}

}  // namespace polybern
