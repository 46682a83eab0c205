#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlrisk {

enum class ErrorCode {
  Syntax,
  Interval,
  Format,
  Gap,
  Empty,
  Mismatch,
  Dimension,
  UnknownPredicate,
  InsufficientHorizon,
  Param,
  Bounds,
  Monotonicity,
  InfiniteRobustness,
  Config,
  Io,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Byte offsets [start, end) into a parsed input.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the formula parser; carries the offending span of the input.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, SourceSpan span)
      : Error(code, message), span_(span) {}

  SourceSpan span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

}  // namespace stlrisk
