#pragma once
// Reproducible RNG streams.
//
// Every walker gets its own generator, keyed on (master seed, start index,
// walker index) through a splitmix64 finalizer. Streams are therefore
// independent of scheduling: the same scenario and seed produce bit-identical
// sample sets for any worker count.

#include <cmath>
#include <cstdint>

#include "mfpt/vec2.hpp"

namespace mfpt {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer (Steele, Lea, Flood). Bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Next splitmix64 output, advancing the state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    return mix64(state);
}

/// Hash-combine used for stream derivation.
inline std::uint64_t derive_key(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + kGolden + (a << 12) + (a >> 4)));
}

/// xoshiro256++ (Blackman & Vigna), seeded via splitmix64 as recommended.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    /// Stream constructor: independent stream for (seed, stream, substream).
    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
        : Xoshiro256pp(derive_key(derive_key(seed, stream), substream)) {}

    std::uint64_t next_u64() {
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

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0,1]; safe as a log() argument.
    double next_double_oc() { return 1.0 - next_double(); }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    /// Exponential variate with the given rate.
    double next_exponential(double rate) { return -std::log(next_double_oc()) / rate; }

    /// Unit vector uniform on the circle. Rejection from the square plus the
    /// angle-doubling map; no trigonometric calls.
    Vec2 next_unit_vector() {
        for (;;) {
            const double u = 2.0 * next_double() - 1.0;
            const double v = 2.0 * next_double() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return {(u * u - v * v) / s, 2.0 * u * v / s};
            }
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace mfpt
