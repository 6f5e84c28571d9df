#pragma once

#include <cmath>
#include <cstdint>

namespace lowrank {

// Counter-based random numbers: every draw is a pure function of
// (seed, c0, c1), so masks and synthetic matrices do not depend on the
// order in which entries are visited and never share state across threads.

namespace detail {

// Finalizer from splitmix64; a full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) {
    return mix64(mix64(mix64(seed) ^ c0) ^ c1);
}

} // namespace detail

/// Uniform draw in [0, 1) keyed by (seed, c0, c1).
inline double uniform_unit(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) {
    // 53 high bits give the usual double-precision lattice.
    return static_cast<double>(detail::hash3(seed, c0, c1) >> 11) * 0x1.0p-53;
}

/// Standard normal draw keyed by (seed, c0, c1), via Box-Muller on two
/// sub-draws. Independent for distinct keys.
inline double gaussian_unit(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) {
    std::uint64_t h1 = detail::hash3(seed, c0, 2 * c1);
    std::uint64_t h2 = detail::hash3(seed, c0, 2 * c1 + 1);
    // Shift u1 away from zero so log(u1) is finite.
    double u1 = (static_cast<double>(h1 >> 11) + 0.5) * 0x1.0p-53;
    double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

/// Stream seed for replication `run_index` of an experiment seeded by `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t run_index) {
    return detail::hash3(seed, 0x5eedULL, run_index);
}

} // namespace lowrank
