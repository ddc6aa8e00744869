#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace medrank {

// All randomness in a run flows from one seed through named substreams, so
// changing how one component draws does not perturb the others.
inline uint64_t mix_seed(uint64_t seed, std::string_view stream, uint64_t index = 0) {
    uint64_t h = 0xcbf29ce484222325ull;
    auto absorb = [&h](uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    absorb(seed);
    for (char c : stream) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    absorb(index);
    // splitmix64 finalizer
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

inline std::mt19937_64 substream(uint64_t seed, std::string_view stream, uint64_t index = 0) {
    return std::mt19937_64(mix_seed(seed, stream, index));
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline size_t uniform_index(std::mt19937_64& rng, size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

}  // namespace medrank
