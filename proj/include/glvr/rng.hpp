#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace glvr {

/// One SplitMix64 output for state `x`: advances by the golden gamma, then mixes.
std::uint64_t splitmix64(std::uint64_t x);

/// xoshiro256++ seeded by SplitMix64 expansion of a 64-bit seed.
///
/// Draw streams are part of the on-disk contract (trial seeds, recovery
/// initializations), so every sampling routine here is fixed:
///  - uniform() is (next >> 11) * 2^-53, in [0, 1)
///  - normal() is Box-Muller with u1 = 1 - uniform() in (0, 1], u2 = uniform();
///    the sine output is cached and returned by the following call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  /// Unbiased integer in [0, n). n must be nonzero.
  std::uint64_t below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> state_{};
  std::optional<double> spare_normal_;
};

}  // namespace glvr
