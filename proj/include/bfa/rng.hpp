#pragma once

#include <cstdint>

namespace bfa {

// splitmix64 step; also the per-point hash behind consistent noisy oracles.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// xoshiro256** seeded via splitmix64. Fixed algorithm so that every seeded
// run reproduces bit-for-bit across platforms and thread counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = x = splitmix64(x) + (x == 0);
        if (!(state_[0] | state_[1] | state_[2] | state_[3])) state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }

    // Independent child stream; deterministic in (seed, stream).
    Rng derive(std::uint64_t stream) const { return Rng(hash_mix(seed_, stream)); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform draw from {0, ..., bound-1} by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
    std::uint64_t seed_;
};

}  // namespace bfa
