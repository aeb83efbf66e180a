#include "blockenc/errors.hpp"

namespace blockenc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::PrepIncompatible: return "PrepIncompatible";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
    case ErrorCode::OutOfUnitRange: return "OutOfUnitRange";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::AllZeroValues: return "AllZeroValues";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NoTransposeOracle: return "NoTransposeOracle";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ComplexLeak: return "ComplexLeak";
    case ErrorCode::InfeasibleParameters: return "InfeasibleParameters";
    case ErrorCode::SingularValueOutOfRange: return "SingularValueOutOfRange";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace blockenc
