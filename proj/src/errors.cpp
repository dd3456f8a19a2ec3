#include "pathcorr/errors.hpp"

namespace pathcorr {

const char* code_name(ErrorCode c) noexcept {
  switch (c) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InvalidMarginal: return "InvalidMarginal";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::MissingScale: return "MissingScale";
    case ErrorCode::SingularRestrictedBlock: return "SingularRestrictedBlock";
    case ErrorCode::DenominatorNonPositive: return "DenominatorNonPositive";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::EmptyRemainder: return "EmptyRemainder";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::UndefinedAtZero: return "UndefinedAtZero";
    case ErrorCode::SpectralRadiusTooLarge: return "SpectralRadiusTooLarge";
    case ErrorCode::SingularSampleCovariance: return "SingularSampleCovariance";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::ParamOutOfBound: return "ParamOutOfBound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pathcorr
