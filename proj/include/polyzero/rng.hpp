#pragma once

#include <cstdint>
#include <random>

#include "polyzero/vec3.hpp"

namespace polyzero {

// All randomness in the library flows through std::mt19937_64 (the engine's
// output sequence is fixed by the C++ standard) plus the hand-rolled variate
// mappings below. std::*_distribution is deliberately avoided: its mapping is
// implementation-defined, and campaign replay must be exact across platforms.

/// SplitMix64 finalizer; used to derive independent sub-seeds from one master
/// seed plus a stream index.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + stream * 0x9E3779B97F4A7C15ull);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform point on the unit sphere (inverse transform in z and azimuth).
inline Vec3 uniform_sphere_point(std::mt19937_64& rng) {
    const double z = 1.0 - 2.0 * uniform01(rng);
    const double phi = 2.0 * M_PI * uniform01(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Pole-weighted point on the unit sphere: z = cbrt(w) with w uniform on
/// [-1,1], so the latitude density grows like z^2 toward both poles.
inline Vec3 pole_weighted_sphere_point(std::mt19937_64& rng) {
    const double w = 1.0 - 2.0 * uniform01(rng);
    const double z = std::cbrt(w);
    const double phi = 2.0 * M_PI * uniform01(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace polyzero
