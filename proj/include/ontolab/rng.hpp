// Counter-based random streams: sample i of a stream is a pure function of
// (seed, i), so results never depend on how work is split across threads.
#pragma once

#include <cstdint>

#include "ontolab/bloch.hpp"

namespace ontolab {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Hash of (seed, i, j): j distinguishes the independent uniforms consumed by
// one logical sample.
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    return splitmix64(splitmix64(splitmix64(seed) + i) + j);
}

// Uniform double in [0, 1) with 53 random bits.
inline double counter_u01(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    return static_cast<double>(counter_hash(seed, i, j) >> 11) * 0x1.0p-53;
}

// Uniform direction on the unit sphere; consumes uniforms j and j+1.
inline BlochVector counter_sphere(std::uint64_t seed, std::uint64_t i, std::uint64_t j = 0) {
    double z = 2.0 * counter_u01(seed, i, j) - 1.0;
    double ph = 6.283185307179586476925286766559 * counter_u01(seed, i, j + 1);
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(ph), s * std::sin(ph), z};
}

}  // namespace ontolab
