#pragma once

#include <cstdint>
#include <limits>

namespace airy {

// SplitMix64 output function over a counter keyed by (seed, stream, substream).
// Any substream can be generated independently, which keeps chunked parallel
// sampling identical to sequential sampling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_(mix(mix(mix(seed) ^ (stream + 0x632be59bd9b4e019ULL)) ^ (substream + 0x9e3779b97f4a7c15ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream tags separating the independent uses of one user seed.
namespace streams {
inline constexpr std::uint64_t kPhotons = 1;
inline constexpr std::uint64_t kPoissonCount = 2;
inline constexpr std::uint64_t kDirections = 3;
inline constexpr std::uint64_t kTensorFrequencies = 4;
inline constexpr std::uint64_t kProposal = 5;
inline constexpr std::uint64_t kOracleNoise = 6;
inline constexpr std::uint64_t kKappa = 7;
}  // namespace streams

}  // namespace airy
