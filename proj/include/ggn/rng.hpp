#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ggn {

// All randomness in the library flows from an explicitly seeded engine.
using Rng = std::mt19937_64;

// Unbiased integer in [0, bound). std::uniform_int_distribution is
// implementation-defined, so seeded runs would not be portable with it.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates shuffle; same caveat about portability as uniform_below.
template <typename T>
inline void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace ggn
