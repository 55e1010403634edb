#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

namespace radclust::numerics {

/// SplitMix64 output finalizer. Also used to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based 64-bit generator (SplitMix64). The n-th output is
/// mix64(seed + n * golden_gamma), so streams are platform independent.
///
/// Single owner; never share one stream across threads. Use fork() to hand
/// a child stream to another worker.
class RngStream {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit RngStream(std::uint64_t seed) noexcept : seed_(seed), state_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double next_uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double next_gaussian() noexcept;

    /// Uniform integer in [0, bound). bound must be positive.
    std::size_t next_below(std::size_t bound) noexcept;

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = next_below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Child stream seeded from this stream's next draw.
    RngStream fork() noexcept { return RngStream(next_u64()); }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    std::optional<double> spare_;
};

inline RngStream make_rng(std::uint64_t seed) noexcept { return RngStream(seed); }

} // namespace radclust::numerics
