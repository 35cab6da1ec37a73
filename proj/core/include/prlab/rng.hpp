#pragma once

#include <cstdint>
#include <random>

namespace prlab {

// Uniform double in [0, 1) with 53 random bits, independent of the
// standard library's distribution implementations.
inline double uniform_unit(std::mt19937& gen) {
    const std::uint64_t hi = gen() >> 5;   // 27 bits
    const std::uint64_t lo = gen() >> 6;   // 26 bits
    return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) *
           (1.0 / 9007199254740992.0);
}

inline double uniform_range(std::mt19937& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

// splitmix64 step, used to derive independent sub-seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace prlab
