#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fraclab {

enum class ErrorCode {
  InvalidArgument,
  NonConvergedQuadrature,
  DivergentIntegral,
  InvalidCells,
  OnBoundary,
  Inconclusive,
  BadParameters,
  EmptySet,
  MixedFarField,
  IncompatibleScheme,
  UnresolvedFeature,
  EntryToleranceFailure,
  DivergentEntry,
  SingularExteriorBlock,
  IndefinitePencil,
  DegenerateData,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fraclab
