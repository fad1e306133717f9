#pragma once

#include <array>
#include <cstdint>

namespace qda {

/// xoshiro256** (Blackman & Vigna) seeded by four SplitMix64 outputs.
///
/// Everything derived from it is written out explicitly so that a given seed
/// yields the same stream on every platform and in any language:
///   uniform()       = (next() >> 11) * 2^-53          in [0,1)
///   uniform_open()  = ((next() >> 11) + 0.5) * 2^-53  in (0,1)
///   normal()        = inv_norm_cdf(uniform_open())
///   gamma(k)        = Marsaglia-Tsang squeeze for k >= 1, with the
///                     U^(1/k) boost for k < 1
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  /// Independent stream for (seed, index): seeds a fresh generator with
  /// splitmix64(seed ^ splitmix64(index + 1)).
  static Rng derive(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  double uniform();
  double uniform_open();
  double normal();
  double gamma(double shape);
  double beta(double a, double b);
  double chi_squared(double dof);

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qda
