#pragma once

#include <cstdint>
#include <string_view>

namespace capclust {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Value at position `index` of the SplitMix64 stream keyed by `seed`.
///
/// The stream is random-access: the value depends only on (seed, index), so
/// per-vertex draws do not depend on the order in which vertices are visited
/// or on how many vertices exist.
constexpr std::uint64_t stream_at(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) + (index + 1) * kGoldenGamma);
}

/// Uniform double in (0, 1] built from the top 53 bits.
constexpr double to_unit_open_closed(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Uniform double in [0, 1).
constexpr double to_unit_closed_open(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Derives an independent child seed for a named purpose (FNV-1a over the tag).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return mix64(seed ^ mix64(h));
}

/// Sequential generator over the same stream; satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept { return stream_at(seed_, counter_++); }

  /// Uniform integer in [0, bound) by rejection, so the result is unbiased.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % bound;
  }

  constexpr double unit() noexcept { return to_unit_closed_open((*this)()); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace capclust
