// Counter-based randomness: every draw is a pure function of
// (seed, stream, a, b, c), so fault and decision draws are reproducible
// under any execution order and independent across (node, round) pairs.

#pragma once

#include <cstdint>

namespace nrs::rng {

enum class Stream : std::uint64_t {
    fault = 0x5141,      // receiver-fault draws, keyed (node, round)
    sim = 0x5142,        // simulator coin flips, keyed (node, round)
    proto_input = 0x5143,// default private-input payload bytes
    topology = 0x5144,   // graph generator draws
    experiment = 0x5145, // analysis sampling draws
};

// splitmix64 finalizer (Stafford mix13)
inline std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t key(std::uint64_t seed, Stream s, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c = 0) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(s));
    h = mix(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = mix(h ^ (b + 0x7f4a7c159e3779b9ULL));
    h = mix(h ^ (c + 0xc159e3779b97f4a7ULL));
    return h;
}

// uniform in [0, 1)
inline double uniform(std::uint64_t seed, Stream s, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c = 0) {
    return static_cast<double>(key(seed, s, a, b, c) >> 11) * 0x1.0p-53;
}

// uniform integer in [0, bound)
inline std::uint64_t below(std::uint64_t seed, Stream s, std::uint64_t a, std::uint64_t b,
                           std::uint64_t bound, std::uint64_t c = 0) {
    return key(seed, s, a, b, c) % bound;
}

}  // namespace nrs::rng
