#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qsd {

// SplitMix64 step (Steele/Lea/Flood). Used for state expansion and for the
// counter-based child-seed derivation below.
inline uint64_t splitmix64_next(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-trajectory seed from (master seed, trajectory index).
// Counter-based so ensemble results cannot depend on scheduling order.
inline uint64_t child_seed(uint64_t master, uint64_t index) {
    uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    splitmix64_next(s);
    return splitmix64_next(s);
}

// xoshiro256++ 1.0 (Blackman & Vigna), seeded by SplitMix64 expansion.
// Chosen over std engines for a pinned, documented bit stream.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<uint64_t, 4> s_{};
};

// Standard normal draws via the Box-Muller transform on xoshiro uniforms.
// std::normal_distribution is implementation-defined, so a fixed transform
// keeps trajectories reproducible across builds.
class NormalSampler {
public:
    explicit NormalSampler(uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - rng_.uniform();  // (0, 1], keeps log finite
        const double u2 = rng_.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    uint64_t next_raw() { return rng_.next(); }
    double uniform() { return rng_.uniform(); }

private:
    Xoshiro256pp rng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace qsd
