#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace stlrisk {

/// Extended real: a finite double, +infinity or -infinity. NaN is never
/// produced by the evaluators; the order is total on the admitted values.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal pos_inf() { return {std::numeric_limits<double>::infinity()}; }
  static constexpr ExtReal neg_inf() { return {-std::numeric_limits<double>::infinity()}; }

  constexpr double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  constexpr bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

  constexpr ExtReal operator-() const { return {-v_}; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    return a.v_ <=> b.v_;
  }

 private:
  double v_ = 0.0;
};

constexpr ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }
constexpr ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

}  // namespace stlrisk
