#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polybern {

enum class ErrorCode {
  SpecParse = 2,
  Validation,
  DegenerateHull,
  UnsupportedDimension,
  OutsidePolytope,
  NoConvergence,
  AtomBlowup,
  MissingDerivative,
  DegenerateFit,
  GridTooCoarse,
  QuadratureFailure,
  InsufficientHits,
};

/// Stable name used in machine-readable error records.
std::string_view code_name(ErrorCode code) noexcept;

/// Numeric exit status the CLI uses for this error kind.
inline int exit_status(ErrorCode code) noexcept { return static_cast<int>(code); }

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polybern
