#pragma once

#include <cstdint>

namespace avekit::io {

// SplitMix64 (Steele, Lea, Flood 2014). The state advances by a fixed odd
// constant, so the k-th output is a pure function of seed and k.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * unit(); }
    int sign() noexcept { return (next() >> 63) ? 1 : -1; }

private:
    std::uint64_t state_;
};

}  // namespace avekit::io
