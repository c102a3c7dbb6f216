#pragma once

#include <cstdint>
#include <limits>

namespace modnull {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: mix(master ^ (index + 1) * gamma).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master ^ ((index + 1) * kGoldenGamma));
}

/**
 * splitmix64 generator. Every derived quantity (uniforms, bounded integers)
 * is defined here bit-for-bit so streams are reproducible independently of
 * the standard library's distribution implementations.
 */
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by 128-bit multiply-high; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
        return static_cast<std::uint64_t>(product >> 64);
    }

private:
    std::uint64_t state_;
};

}  // namespace modnull
