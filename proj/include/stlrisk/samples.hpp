#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stlrisk {

/// Finite cost samples Z^1..Z^N, with Z^i = -rho(X^i, t) when produced by
/// ensemble evaluation. Throws Error(Empty) for N = 0 and
/// Error(InfiniteRobustness) for a non-finite entry.
class RobustnessSamples {
 public:
  explicit RobustnessSamples(std::vector<double> z);

  std::size_t size() const { return z_.size(); }
  std::span<const double> values() const { return z_; }
  double operator[](std::size_t i) const { return z_[i]; }

  friend bool operator==(const RobustnessSamples&, const RobustnessSamples&) = default;

 private:
  std::vector<double> z_;
};

}  // namespace stlrisk
