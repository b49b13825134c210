#pragma once

#include <cstdint>
#include <random>

namespace ion2d {

// Deterministic per-stream RNG: one global seed, substreams derived by a
// splitmix64 hash of (seed, stream id).  Chunked sampling loops use one
// stream per chunk so results do not depend on thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

}  // namespace ion2d
