#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace dynoct::rng {

// Counter-based substreams: every stream is a pure function of
// (seed, key0..key3), so draws do not depend on evaluation order or the
// thread schedule. Mixing is the splitmix64 finalizer.

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform in (0, 1]; never returns 0 so log() is always safe.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

class Stream {
public:
    static Stream make(std::uint64_t seed, std::uint64_t tag, std::uint64_t k0 = 0,
                       std::uint64_t k1 = 0, std::uint64_t k2 = 0) {
        std::uint64_t h = mix64(seed ^ 0xD1B54A32D192ED03ull);
        h = mix64(h ^ (tag + kGamma));
        h = mix64(h ^ (k0 + kGamma));
        h = mix64(h ^ (k1 + kGamma));
        h = mix64(h ^ (k2 + kGamma));
        return Stream(h);
    }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    double next_unit() { return to_unit(next_u64()); }

    /// Box-Muller pair of independent standard normals.
    std::pair<double, double> next_gaussian_pair() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    double next_gaussian() { return next_gaussian_pair().first; }

private:
    explicit Stream(std::uint64_t state) : state_(state) {}
    std::uint64_t state_;
};

// Stream tags; distinct tags keep the draw families independent.
inline constexpr std::uint64_t kTagCollagen = 1;
inline constexpr std::uint64_t kTagMetabolic = 2;

} // namespace dynoct::rng
