#pragma once

#include <cstdint>

namespace geodetect {

// SplitMix64 (Steele et al., public domain reference mixer). Fast, stateless
// per step, and good enough statistically for Monte Carlo use. Satisfies
// UniformRandomBitGenerator so it can drive <random> distributions if needed.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1), 53 mantissa bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform double in (0,1]; safe operand for log().
    double uniform01_open_low() { return 1.0 - uniform01(); }

private:
    std::uint64_t state_;
};

// Seed domains. Generator randomness (weights, positions, edges) and oracle
// randomness live in disjoint domains so that verification never reuses the
// stream it is checking.
enum class RngDomain : std::uint64_t {
    weights = 1,
    positions = 2,
    edges_background = 3,  // non-geometric pair sampling (H0 and H1)
    edges_community = 4,   // geometric pair sampling inside the community
    oracle = 5,
    experiment = 6,
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives an independent stream from (seed, domain, stream). Counter-based:
// constructing the same triple always yields the same sequence, regardless
// of what other streams were consumed, so parallel generation by index is
// schedule-independent.
inline SplitMix64 substream(std::uint64_t seed, RngDomain domain, std::uint64_t stream = 0) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (static_cast<std::uint64_t>(domain) * 0xD1342543DE82EF95ull));
    h = mix64(h ^ (stream * 0xAF251AF3B0F025B5ull));
    return SplitMix64{h};
}

// Derives a child seed (for nested use such as per-replica model seeds).
inline std::uint64_t derive_seed(std::uint64_t seed, RngDomain domain, std::uint64_t stream = 0) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (static_cast<std::uint64_t>(domain) * 0xD1342543DE82EF95ull));
    return mix64(h ^ (stream * 0xAF251AF3B0F025B5ull));
}

}  // namespace geodetect
