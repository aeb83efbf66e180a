#pragma once

#include <stdexcept>
#include <string>

namespace blockenc {

enum class ErrorCode {
  LabelCollision,
  OutOfBounds,
  PrepIncompatible,
  SupportTooLarge,
  OutOfUnitRange,
  NotBijective,
  AllZeroValues,
  DimMismatch,
  NoTransposeOracle,
  NotDivisible,
  NotSymmetric,
  ComplexLeak,
  InfeasibleParameters,
  SingularValueOutOfRange,
  BadN,
  BadShape,
  TooLarge,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blockenc
