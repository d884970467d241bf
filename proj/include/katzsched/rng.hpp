#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace katzsched {

// mt19937_64 with hand-rolled draws so output bytes do not depend on the
// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform in [0, n); n must be positive.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(next_double() * static_cast<double>(n)) % n;
    }

    // Index sampled proportionally to the (non-negative) weights; falls
    // back to uniform when all weights are zero.
    std::size_t weighted_index(std::span<const double> weights);

  private:
    std::mt19937_64 eng_;
};

} // namespace katzsched
