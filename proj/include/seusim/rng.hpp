#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace seusim {

// Counter-free splittable PRNG. Substreams are derived by hashing
// (master seed, stream index, salt), so any worker can seed the stream
// for iteration i without generating the i-1 streams before it.
//
// Engine: xoshiro256++ seeded through splitmix64.
// Normal deviates: Box-Muller on 53-bit uniforms (identified in campaign
// report headers as "xoshiro256++/box-muller").

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    /// Derive an independent stream keyed by (master, index, salt).
    static Rng substream(uint64_t master, uint64_t index, uint64_t salt) {
        uint64_t sm = master;
        (void)splitmix64(sm);
        sm ^= splitmix64(sm) + index * 0x9e3779b97f4a7c15ULL;
        sm ^= splitmix64(sm) + salt * 0xd1b54a32d192ed03ULL;
        return Rng(splitmix64(sm));
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), unbiased (rejection sampling).
    uint64_t below(uint64_t n) {
        const uint64_t threshold = -n % n;  // 2^64 mod n
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal deviate, Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so log() is finite.
        double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    static constexpr const char* kDescription = "xoshiro256++/box-muller";

    /// 64-bit sub-seed keyed by (master, index, salt); same derivation as
    /// substream().
    static uint64_t derive_seed(uint64_t master, uint64_t index, uint64_t salt) {
        uint64_t sm = master;
        (void)splitmix64(sm);
        sm ^= splitmix64(sm) + index * 0x9e3779b97f4a7c15ULL;
        sm ^= splitmix64(sm) + salt * 0xd1b54a32d192ed03ULL;
        return splitmix64(sm);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace seusim
