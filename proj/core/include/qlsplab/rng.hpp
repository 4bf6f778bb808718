#pragma once

#include <cstdint>
#include <limits>

namespace qlsplab::rng {

// All randomness in the library derives from the splitmix64 generator below.
// Its n-th output is a pure function of (state, n), which is what makes the
// counter-based helpers possible: output n of the stream keyed by `key` is
// mix64(key + (n + 1) * kGolden).

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Output `counter` (0-based) of the splitmix64 stream seeded with `key`.
constexpr std::uint64_t counter_draw(std::uint64_t key,
                                     std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGolden);
}

/// Key of an independent sub-stream, e.g. one per trial or per purpose.
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + kGolden));
}

/// Top 53 bits mapped to [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream tags for derive_key; fixed so fixtures are reproducible.
namespace stream {
inline constexpr std::uint64_t kSampling = 1;
inline constexpr std::uint64_t kPerturbation = 2;
inline constexpr std::uint64_t kPipeline = 3;
inline constexpr std::uint64_t kTrials = 4;
}  // namespace stream

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Unbiased integer in [0, bound) by rejection of the short top range.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  double uniform01() noexcept { return to_unit((*this)()); }

  /// Standard normal via Box-Muller; one value per call (the partner is
  /// discarded so the stream position stays a simple function of the call count).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace qlsplab::rng
