#pragma once

#include <cstdint>

namespace hull_lil {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based generator: the n-th output of stream (seed, stream) is
/// mix64(key + n * gamma), with key derived from both indices. Streams with
/// distinct (seed, stream) pairs are independent and reproducible, so
/// replica results never depend on scheduling or thread count.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform();

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hull_lil
