#include "stlrisk/error.hpp"

namespace stlrisk {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Interval: return "IntervalError";
    case ErrorCode::Format: return "FormatError";
    case ErrorCode::Gap: return "GapError";
    case ErrorCode::Empty: return "EmptyError";
    case ErrorCode::Mismatch: return "MismatchError";
    case ErrorCode::Dimension: return "DimensionError";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::InsufficientHorizon: return "InsufficientHorizon";
    case ErrorCode::Param: return "ParamError";
    case ErrorCode::Bounds: return "BoundsError";
    case ErrorCode::Monotonicity: return "MonotonicityError";
    case ErrorCode::InfiniteRobustness: return "InfiniteRobustness";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace stlrisk
