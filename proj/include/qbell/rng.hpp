// Seed derivation shared by every randomized component: independent
// streams are keyed by (seed, stream, substream) through splitmix64, and
// each stream drives its own mt19937_64.
#pragma once

#include <cstdint>
#include <random>

namespace qbell {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t substream = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ substream);
}

inline std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t substream = 0) {
    return std::mt19937_64(derive_seed(seed, stream, substream));
}

// Counter-based uniform stream for per-shot draws: every shot owns the
// stream (seed, circuit index, shot index) and consumes draws by counter.
struct ShotRng {
    std::uint64_t base;
    std::uint64_t counter = 0;

    ShotRng(std::uint64_t seed, std::uint64_t circuit, std::uint64_t shot)
        : base(derive_seed(seed, circuit, shot)) {}

    // uniform in [0, 1)
    double next_uniform() {
        std::uint64_t r = splitmix64(base + ++counter);
        return static_cast<double>(r >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(next_uniform() *
                                          static_cast<double>(bound));
    }
};

} // namespace qbell
