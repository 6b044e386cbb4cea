#pragma once

// Deterministic 64-bit random streams for Monte Carlo trials.

#include <cstdint>

namespace maxsub {

inline constexpr const char* kRngAlgorithm = "splitmix64/substream-v1";

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// SplitMix64 generator. Streams for different (seed, index) pairs are
/// decorrelated by mixing both into the starting state.
class RngStream {
public:
    using result_type = std::uint64_t;

    constexpr explicit RngStream(std::uint64_t state = 0) noexcept : state_(state) {}

    static constexpr RngStream substream(std::uint64_t seed, std::uint64_t index) noexcept {
        return RngStream(mix64(mix64(seed) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL)));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    constexpr double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace maxsub
