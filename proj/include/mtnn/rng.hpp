#pragma once

#include <cstdint>
#include <vector>

namespace mtnn {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic PRNG used for everything random in this project:
/// xoshiro256** with splitmix64 state expansion. The algorithm is fixed and
/// documented in docs/formats.md so ensembles and training runs reproduce
/// bit-for-bit across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {
        uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [lo, hi] inclusive, rejection-sampled (unbiased).
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        if (range == 0) return lo + static_cast<int64_t>(next_u64());
        const uint64_t reject_below = (0 - range) % range;
        uint64_t x = next_u64();
        while (x < reject_below) x = next_u64();
        return lo + static_cast<int64_t>(x % range);
    }

    /// Independent derived stream; does not advance this generator.
    Rng fork(uint64_t stream) const {
        uint64_t sm = seed_ ^ (0x632be59bd9b4e019ull * (stream + 1));
        return Rng(splitmix64(sm));
    }

    uint64_t seed() const { return seed_; }

    /// Fisher-Yates shuffle driven by this generator.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t seed_;
    uint64_t state_[4];
};

}  // namespace mtnn
