#pragma once

#include <cstdint>
#include <limits>

namespace porodim {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a parent seed and a stream index.
/// Used for per-path, per-trial and per-node randomness so that serial and
/// parallel schedules draw identical numbers.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + kGolden));
}

/// Counter-based generator: the i-th output is a pure function of (key, i).
/// Satisfies UniformRandomBitGenerator so it can feed <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return at(counter_++); }

  /// Output at an arbitrary counter position without advancing.
  [[nodiscard]] constexpr result_type at(std::uint64_t i) const noexcept {
    return mix64(key_ + (i + 1) * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

  /// Child generator with its own key; the parent is untouched.
  [[nodiscard]] constexpr CounterRng split(std::uint64_t stream) const noexcept {
    return CounterRng(derive_seed(key_, stream));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace porodim
