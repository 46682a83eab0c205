#pragma once

#include <string>
#include <string_view>

#include "stlrisk/formula.hpp"

namespace stlrisk {

/// Parses the textual formula language:
///
///   formula  := disj
///   disj     := conj ("|" conj)*
///   conj     := until ("&" until)*
///   until    := unary (("U" | "S") interval unary)?
///   unary    := "!" unary | ("G" | "F" | "H" | "O") interval unary | atom
///   atom     := "true" | identifier | "(" formula ")"
///   interval := "[" integer "," (integer | "inf") "]"
///
/// S/H/O are the past until/always/eventually. U and S do not chain without
/// parentheses. Throws ParseError (Syntax or Interval) with the offending span.
Formula parse(std::string_view text);

/// Canonical text with the fewest parentheses that parse back to f.
std::string format(const Formula& f);

}  // namespace stlrisk
