#pragma once

#include <cstdint>
#include <random>

namespace graphemb {

/// Engine used everywhere; streams are derived, never shared.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-style key derivation: the stream for (seed, k1, k2, ...) depends
/// only on those values, so work can be split across threads in any order.
template <class... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = splitmix64(seed);
  ((h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(keys) + 0x632BE59BD9B4E019ULL))), ...);
  return h;
}

template <class... Keys>
Rng make_rng(std::uint64_t seed, Keys... keys) {
  return Rng(derive_seed(seed, keys...));
}

}  // namespace graphemb
