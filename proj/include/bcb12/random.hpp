#pragma once

#include <cstdint>
#include <random>

namespace bcb12 {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection on the raw 64-bit engine output.
/// std::uniform_int_distribution is implementation-defined, this is not, so
/// seeded runs are reproducible across standard libraries.
inline std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace bcb12
