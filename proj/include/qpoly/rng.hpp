#pragma once

#include <cstdint>
#include <utility>

namespace qpoly {

/// SplitMix64 finalizer; the single mixing primitive behind all randomness
/// here, chosen so streams are reproducible from a written-down recipe.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent child stream seed for (seed, index).
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 1));
}

/// Counter-based SplitMix64 stream. Draw k of seed s is mix64 applied to
/// s + k*golden, so any draw is addressable without advancing state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal pair via Box-Muller on two uniform draws.
    std::pair<double, double> gaussian_pair();

  private:
    std::uint64_t state_;
};

/// Seed 0 is reserved for test fixtures.
inline constexpr std::uint64_t kFixtureSeed = 0;

}  // namespace qpoly
