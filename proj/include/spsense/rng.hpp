#pragma once

#include <cstdint>
#include <random>

namespace spsense {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to turn (seed, stream id) pairs into
// statistically independent sub-seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic sub-stream derivation. Components seeded from different
// stream ids can be regenerated independently of draw order elsewhere.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return mix64(root ^ mix64(stream));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

} // namespace spsense
