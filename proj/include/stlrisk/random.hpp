#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace stlrisk {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output
/// is a pure function of (key, counter), so any draw can be reproduced
/// without replaying a stream.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter ctr) const;

 private:
  Key key_;
};

/// Two 53-bit uniforms from one Philox block: first in (0,1], second in [0,1).
std::pair<double, double> uniform_pair(const Philox4x32::Counter& block);

/// Two independent standard normals via the Box-Muller transform of one
/// Philox block addressed by `ctr`.
std::pair<double, double> normal_pair(const Philox4x32& gen, const Philox4x32::Counter& ctr);

}  // namespace stlrisk
