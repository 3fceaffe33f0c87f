#pragma once

// Deterministic, seedable randomness.
//
// Generator: xoshiro256** (Blackman & Vigna, public domain). The 256-bit
// state is filled from the 64-bit seed with four successive SplitMix64
// outputs:
//
//   splitmix64(x):  x += 0x9E3779B97F4A7C15
//                   z = x
//                   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                   return z ^ (z >> 31)
//
//   next():         result = rotl(s1 * 5, 7) * 9
//                   t = s1 << 17
//                   s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3
//                   s2 ^= t;  s3 = rotl(s3, 45)
//                   return result
//
// Replicate substreams: substream(seed, i) seeds a fresh generator with
//
//   mix(seed ^ mix(i ^ 0xD1B54A32D192ED03))
//
// where mix is the SplitMix64 finalizer (the three xor-shift-multiply steps
// above, without the increment). mix is a bijection on 64-bit words, so
// distinct indices always produce distinct seeds for a fixed base seed.
//
// Integer range reduction uses rejection sampling; doubles take the top
// 53 bits. Every step is plain 64-bit unsigned arithmetic, so sequences
// are identical across platforms, compilers and build modes.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tentative/error.hpp"

namespace tentative {

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

}  // namespace detail

class SeededGenerator {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SeededGenerator(std::uint64_t seed = 0) noexcept : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64_next(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound). Throws when bound is zero.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error("below(): empty range");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = (*this)();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  friend constexpr bool operator==(const SeededGenerator&, const SeededGenerator&) = default;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

/// Generator for replicate `index` of a run seeded with `seed`. Depends only
/// on the pair, never on how many other substreams exist or were consumed.
constexpr SeededGenerator substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return SeededGenerator(detail::mix64(seed ^ detail::mix64(index ^ 0xD1B54A32D192ED03ULL)));
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(SeededGenerator& gen, std::span<T> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = gen.below(i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

template <typename T>
[[nodiscard]] std::vector<T> shuffled(SeededGenerator& gen, std::vector<T> items) {
  shuffle(gen, std::span<T>(items));
  return items;
}

/// Partial Fisher-Yates: after the call items[0..k) is a uniform random
/// k-subset of the input in uniform random order.
template <typename T>
void partial_shuffle(SeededGenerator& gen, std::span<T> items, std::size_t k) {
  if (k > items.size()) throw Error("partial_shuffle(): k exceeds item count");
  const std::size_t n = items.size();
  for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
    const std::size_t j = i + gen.below(n - i);
    using std::swap;
    swap(items[i], items[j]);
  }
}

/// k independent uniform draws from items.
template <typename T>
[[nodiscard]] std::vector<T> draw_with_replacement(SeededGenerator& gen, std::span<const T> items,
                                                   std::size_t k) {
  if (items.empty()) throw Error("draw_with_replacement(): empty item list");
  std::vector<T> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(items[gen.below(items.size())]);
  return out;
}

template <typename T>
[[nodiscard]] std::vector<T> draw_with_replacement(SeededGenerator& gen, const std::vector<T>& items,
                                                   std::size_t k) {
  return draw_with_replacement(gen, std::span<const T>(items), k);
}

}  // namespace tentative
