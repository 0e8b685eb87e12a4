#pragma once

#include <cstdint>
#include <random>

namespace sympcoh {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent stream for task `index`, keyed on hash(seed) ^ index. Every
// Monte-Carlo loop draws sample i from stream(seed, i), so results do not
// depend on how indices are distributed over worker threads.
inline Rng stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ index));
}

}  // namespace sympcoh
