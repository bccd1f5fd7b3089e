#include "fraclab/error.hpp"

namespace fraclab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergedQuadrature: return "NonConvergedQuadrature";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::InvalidCells: return "InvalidCells";
    case ErrorCode::OnBoundary: return "OnBoundary";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::MixedFarField: return "MixedFarField";
    case ErrorCode::IncompatibleScheme: return "IncompatibleScheme";
    case ErrorCode::UnresolvedFeature: return "UnresolvedFeature";
    case ErrorCode::EntryToleranceFailure: return "EntryToleranceFailure";
    case ErrorCode::DivergentEntry: return "DivergentEntry";
    case ErrorCode::SingularExteriorBlock: return "SingularExteriorBlock";
    case ErrorCode::IndefinitePencil: return "IndefinitePencil";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace fraclab
