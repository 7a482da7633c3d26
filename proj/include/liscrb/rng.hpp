#pragma once

#include <cstdint>
#include <limits>

namespace liscrb {

/// Counter-based generator: output i of stream (seed, stream) is a SplitMix64
/// finaliser of key + i * gamma. Streams derived with split() are
/// independent of each other and of the order in which they are consumed,
/// which keeps parallel trials reproducible.
///
/// Satisfies UniformRandomBitGenerator, so std distributions accept it.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), key_(mix(seed ^ mix(stream + kGamma))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (counter_++) * kGamma); }

  /// Child stream keyed by (this stream's key, id).
  CounterRng split(std::uint64_t id) const {
    CounterRng child(seed_, 0);
    child.key_ = mix(key_ ^ mix(id + 0x632be59bd9b4e019ULL));
    return child;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace liscrb
