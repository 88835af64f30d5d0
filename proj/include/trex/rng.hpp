#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace trex {

namespace detail {

// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/**
 * Counter-based random stream keyed by (master seed, stream index).
 *
 * The i-th draw is a pure function of (seed, index, i), so a stream can be
 * recreated anywhere and consumers never need to share generator state.
 * Satisfies UniformRandomBitGenerator.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t index) noexcept
        : seed_(seed), index_(index),
          key_(detail::mix64(detail::mix64(seed ^ 0x6a09e667f3bcc909ULL) + detail::mix64(index + 0x9e3779b97f4a7c15ULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        return detail::mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift; bias is < 2^-64 * bound, irrelevant here.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
    }

    /// Child stream for nested consumers (e.g. experiment k inside trial t).
    RngStream split(std::uint64_t child) const noexcept { return RngStream(key_, child); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t index() const noexcept { return index_; }

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace trex
