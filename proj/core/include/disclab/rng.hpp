#pragma once

#include <cstdint>
#include <random>

namespace disclab {

// Seeded randomness is part of the file-format contract: identical seeds must
// reproduce identical artifacts. std::mt19937_64 output is fully specified by
// the standard, but the stdlib distributions are not, so we draw from the raw
// engine ourselves.

// Uniform integer in [0, bound), bound >= 1, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fair coin: +1 or -1.
inline int uniform_sign(std::mt19937_64& rng) {
  return (rng() >> 63) ? 1 : -1;
}

}  // namespace disclab
