#pragma once

#include <cstdint>
#include <random>

namespace rmsolve {

/// Uniform double in [lo, hi) built from the top 53 bits of one draw, so
/// streams are identical on every standard library.
inline double uniform_real(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi] (slightly biased modulo, fine for test data).
inline long uniform_int(std::mt19937_64& g, long lo, long hi) {
  return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace rmsolve
