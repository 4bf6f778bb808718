#include "qlsplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace qlsplab::rng {

std::uint64_t SplitMix64::uniform_below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // 2^64 mod bound values at the bottom would be over-represented.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = (*this)();
    if (r >= threshold) return r % bound;
  }
}

double SplitMix64::normal() noexcept {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qlsplab::rng
