// rng.hpp - deterministic seedable random streams for reproducible playouts.
//
// All randomness in the library flows through these generators rather than
// <random> distributions, so results are bit-identical across platforms,
// runs and worker counts. Trial i of a batch always uses derive_seed(master, i),
// making aggregation independent of execution order.
#pragma once

#include <cstdint>

namespace ludecon {

// splitmix64 (Steele, Lea, Flood); used for seed derivation and hashing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stable per-stream seed: stream k of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + stream * 0x9E3779B97F4A7C15ULL);
}

// xoshiro256++ (Blackman, Vigna). Small, fast, public domain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x = splitmix64(x);
            w = x;
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound) via rejection; bound >= 1.
    std::uint32_t below(std::uint32_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t span = 0x100000000ULL;
        const std::uint64_t limit = span - span % bound;
        for (;;) {
            const std::uint64_t v = next() >> 32;
            if (v < limit) return static_cast<std::uint32_t>(v % bound);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Counter-based draw: a pure function of (seed, counter). Used for dice so
// move generation stays const over the game state.
inline std::uint32_t counter_draw(std::uint64_t seed, std::uint64_t counter,
                                  std::uint32_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t v = splitmix64(seed ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
    return static_cast<std::uint32_t>(v % bound);
}

}  // namespace ludecon
