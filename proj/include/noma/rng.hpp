#pragma once

#include <cstdint>
#include <random>

namespace noma {

// splitmix64 finalizer, used to derive independent substream seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based substream derivation: the stream for (seed, a, b, c) is
// independent of execution order and of how work is parallelized.
inline std::mt19937_64 substream(uint64_t seed, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = mix64(seed);
    s = mix64(s ^ mix64(a));
    s = mix64(s ^ mix64(b));
    s = mix64(s ^ mix64(c));
    return std::mt19937_64(s);
}

}  // namespace noma
