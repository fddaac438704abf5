// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <type_traits>

namespace ecgbench {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ull) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }
inline std::uint64_t mix(std::uint64_t h, std::string_view v) { return splitmix64(h ^ fnv1a(v)); }
inline std::uint64_t mix(std::uint64_t h, const char* v) { return mix(h, std::string_view(v)); }
template <class T>
  requires std::is_integral_v<T>
inline std::uint64_t mix(std::uint64_t h, T v) {
  return mix(h, static_cast<std::uint64_t>(v));
}

}  // namespace detail

/// Sub-seed for a named purpose; order of tags matters.
template <class... Tags>
std::uint64_t derive_seed(std::uint64_t base, const Tags&... tags) {
  std::uint64_t h = detail::splitmix64(base);
  ((h = detail::mix(h, tags)), ...);
  return h;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace ecgbench
