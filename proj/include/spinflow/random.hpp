#pragma once

#include <cstdint>

namespace spinflow {

/// splitmix64 generator: state += 0x9E3779B97F4A7C15, then the standard
/// xor-shift/multiply finaliser. Reproducible across platforms and languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) from the top 53 bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform in [-1, 1).
    double symmetric() noexcept { return 2.0 * uniform() - 1.0; }

private:
    std::uint64_t state_;
};

}  // namespace spinflow
