#pragma once

#include <cstdint>

namespace chebmark::detail {

// Deterministic, platform-independent generator for the sampling paths;
// std::uniform_real_distribution is implementation-defined, this is not.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }
};

}  // namespace chebmark::detail
