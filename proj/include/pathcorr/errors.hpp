#pragma once

#include <stdexcept>
#include <string>

namespace pathcorr {

enum class ErrorCode {
  NotSquare,
  NotSymmetric,
  NotPositiveDefinite,
  InvalidGraph,
  InvalidMarginal,
  SingularMatrix,
  MissingScale,
  SingularRestrictedBlock,
  DenominatorNonPositive,
  QOutOfRange,
  EmptyRemainder,
  SingularBlock,
  DimensionMismatch,
  DegenerateDenominator,
  IndexOutOfRange,
  UnknownLabel,
  UndefinedAtZero,
  SpectralRadiusTooLarge,
  SingularSampleCovariance,
  DegenerateColumn,
  ParamOutOfBound,
  InvalidArgument,
  ParseError,
  IoError
};

const char* code_name(ErrorCode c) noexcept;

// every module failure is one of these
class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& msg)
      : std::runtime_error(std::string(code_name(c)) + ": " + msg), code_(c) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pathcorr
