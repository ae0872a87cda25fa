#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace hetclust {

namespace detail {

/// SplitMix64 finalizer; good 64-bit avalanche mixing.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001B3ULL;
    }
    return h;
}

}  // namespace detail

/// Keyed random stream for reproducible parallel Monte Carlo. A stream
/// is addressed by (seed, replicate index, group id, channel); distinct
/// keys give statistically independent streams, so replicates can be
/// generated in any order or in parallel with identical results.
///
/// The generator is SplitMix64 over a mixed key. Normal deviates use
/// Box-Muller on 53-bit uniforms, with the spare deviate cached, so the
/// sequence is fully determined by the key and the call sequence and
/// does not depend on any platform distribution implementation.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t replicate,
              std::string_view group_id, std::uint32_t channel) noexcept {
        constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
        state_ = detail::mix64(seed + golden);
        state_ = detail::mix64(state_ ^ (replicate + golden));
        state_ = detail::mix64(state_ ^ detail::fnv1a64(group_id));
        state_ = detail::mix64(state_ ^ (channel + golden));
    }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::mix64(state_);
    }

    /// Uniform double strictly inside (0, 1).
    double next_uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_normal(double mean, double sd) noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return mean + sd * spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return mean + sd * radius * std::cos(angle);
    }

private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace hetclust
