#pragma once

#include <cstdint>
#include <limits>

namespace iconoclasm {

// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator so it
// can drive the <random> distributions. Every seeded quantity in the project
// (base messages, model parameters, samples) comes from this generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ULL;
  static constexpr std::uint64_t kMul2 = 0x94D049BB133111EBULL;

  constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * kMul1;
    z = (z ^ (z >> 27)) * kMul2;
    return z ^ (z >> 31);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  // Derives an independent stream; used to give each sampling stage its own seed.
  constexpr SplitMix64 split() noexcept { return SplitMix64((*this)()); }

 private:
  std::uint64_t state_;
};

}  // namespace iconoclasm
