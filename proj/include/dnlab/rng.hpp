#pragma once

#include <cmath>
#include <cstdint>

namespace dnlab {

/// Counter-based random stream keyed by (seed, sample index).
///
/// Every Monte Carlo sample owns its own stream, so estimates are
/// bit-identical no matter how samples are partitioned across workers.
/// The generator applies the splitmix64 finalizer twice to a keyed
/// counter, which is enough mixing for desk-scale sampling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index)
      : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^
                 mix(index + 0xbf58476d1ce4e5b9ull))) {}

  std::uint64_t next_u64() {
    return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull);
  }

  /// Uniform double in (0, 1); never returns 0 so logs are safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential holding time with the given rate.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dnlab
