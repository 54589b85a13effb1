#pragma once

#include <cstdint>
#include <random>

namespace blest {

// Deterministic RNG wrapper. std::mt19937_64's raw output sequence is fixed by the
// standard, but the distribution adapters are not; all range reductions here are
// explicit so seeded results are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Unbiased integer in [0, bound) via rejection sampling. bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

private:
    std::mt19937_64 eng_;
};

}  // namespace blest
