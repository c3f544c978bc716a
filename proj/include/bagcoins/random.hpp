#pragma once

#include <cstdint>
#include <limits>

namespace bagcoins {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Key for the stream owned by record `index` under a user seed. Depends only
// on the pair, so records can be processed in any order or in parallel.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

/// Counter-based random stream: output n is mix64(key + n * golden).
/// (SplitMix64 with the key as its initial state.)
///
/// Satisfies UniformRandomBitGenerator, but the library uses its own
/// bounded-integer and floating-point transforms below so that results are
/// bit-identical across standard library implementations.
class Stream {
public:
    using result_type = std::uint64_t;

    constexpr explicit Stream(std::uint64_t key) noexcept : state_(key) {}
    constexpr Stream(std::uint64_t seed, std::uint64_t index) noexcept
        : state_(derive_key(seed, index)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        const std::uint64_t counter = state_;
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(counter);
    }

    // Uniform on {0, ..., bound-1}, unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept;

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method (no cached second draw,
    // so the stream position depends only on the number of calls).
    double normal() noexcept;

private:
    std::uint64_t state_;
};

}  // namespace bagcoins
