#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace kanhsi::nn {

/// xoshiro256** generator, state expanded from the seed with SplitMix64.
///
/// Every derived draw (uniform doubles, bounded integers, normals, shuffles)
/// is implemented here on top of next_u64() so a seed reproduces the same
/// sequence on any platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, bound), bound > 0. Unbiased (rejection).
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Standard normal via Box-Muller (no cached second value).
    double normal() noexcept;

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace kanhsi::nn
