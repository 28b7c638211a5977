#pragma once

#include <cstdint>

namespace kgenfit {

// splitmix64 finaliser (Steele/Lea/Flood). Used as a stateless hash when
// deriving child seeds and as the step function of SplitMix64.
inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based 64-bit generator. Tiny state, fully portable output
// stream, cheap to split; quality is ample for Monte-Carlo sampling.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() { return splitmix64_mix(state_++); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Child seed for the i-th independent replicate stream: seed XOR splitmix(i).
// Scheduling-independent by construction.
inline constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ splitmix64_mix(index);
}

// Deterministic retry seed for a replicate whose fit did not converge.
inline constexpr std::uint64_t retry_seed(std::uint64_t child, unsigned attempt) {
    return splitmix64_mix(child + attempt);
}

// FNV-1a, used to derive per-instrument seeds from tickers so batch results
// do not depend on directory iteration order.
inline constexpr std::uint64_t fnv1a64(const char* s, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(s[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace kgenfit
