#pragma once

#include <cstdint>

namespace ncstomo {

/// Counter-based deterministic RNG. A Stream is derived from (seed, stream_id)
/// with the SplitMix64 finalizer, so independent bins/probes can draw from
/// disjoint streams in any order and still reproduce bit-for-bit.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  /// Uniform in [2^-53, 1).
  double next_double();
  /// Standard normal via Box-Muller; pairs are cached per stream.
  double next_normal();
  /// Poisson sample: product-of-uniforms inversion for mean < 30,
  /// PTRS transformed rejection (Hormann 1993) for larger means.
  std::uint64_t next_poisson(double mean);

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool have_cached_ = false;
};

/// SplitMix64 finalizer, exposed for tests of the stream-derivation contract.
std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace ncstomo
