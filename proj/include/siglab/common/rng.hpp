#pragma once

#include <cstdint>

namespace siglab {

/// SplitMix64: deterministic, platform-independent stream generator.
/// Used wherever reproducibility of a field given (seed, site, channel)
/// matters; streams are split by hashing the tuple, never by sharing state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53 bits.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1,1).
    double symmetric() { return 2.0 * uniform() - 1.0; }
};

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(a ^ (0x9e3779b97f4a7c15ull + b));
    return s.next();
}

} // namespace siglab
