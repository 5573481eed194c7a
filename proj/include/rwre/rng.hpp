#pragma once

#include <cstdint>
#include <random>

namespace rwre {

// SplitMix64 step; used both as a seed scrambler and as a counter-based
// stream splitter (master seed + stream index -> independent substream seed).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream seed for (master, stream). Counter-based: adding streams never
// perturbs existing ones.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master + stream * 0x9e3779b97f4a7c15ULL;
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream) {
    return std::mt19937_64(substream_seed(master, stream));
}

// Uniform double in [0,1) with 53 random bits. Hand-rolled on purpose:
// std::uniform_real_distribution is implementation-defined, which would break
// bit-identical replay across toolchains.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rwre
