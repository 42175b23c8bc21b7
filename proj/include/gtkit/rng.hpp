#pragma once

#include <cmath>
#include <cstdint>

namespace gtkit {

// SplitMix64 finalizer (Stafford variant 13 as used by splitmix64).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives the seed for stream `index` from a master seed. Counter-based so
// any trial's stream can be reconstructed without generating its predecessors.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ ((index + 1) * 0x9E3779B97F4A7C15ULL));
}

// xoshiro256** by Blackman & Vigna (public domain reference implementation),
// state seeded through SplitMix64. Fully specified here so that seeded runs
// are bit-identical across platforms; no std:: distributions are used for the
// same reason.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& si : s_) {
            z += 0x9E3779B97F4A7C15ULL;
            std::uint64_t w = z;
            w = (w ^ (w >> 30)) * 0xBF58476D1CE4E5B9ULL;
            w = (w ^ (w >> 27)) * 0x94D049BB133111EBULL;
            si = w ^ (w >> 31);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // One Bernoulli(p) draw consuming exactly one 64-bit word.
    bool bernoulli(double p) { return next_u64() < threshold(p); }

    // p -> 64-bit comparison threshold, exact to one ulp of p * 2^64.
    static std::uint64_t threshold(double p) {
        if (p <= 0.0) return 0;
        const double t = std::ldexp(p, 64);
        if (t >= 0x1.0p64) return ~0ULL;
        return static_cast<std::uint64_t>(t);
    }

    // Unbiased uniform integer in [0, bound) (Lemire's multiply-shift with rejection).
    std::uint64_t uniform_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace gtkit
