#pragma once

// Deterministic random number generation for the simulator. A fixed,
// self-contained generator (xoshiro256++ seeded through splitmix64) is used
// instead of std::mt19937 so that streams are reproducible bit-for-bit and
// independent substreams can be derived from one user seed.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cdc {

/// One step of the splitmix64 sequence; also usable as a 64-bit mixer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a well-separated substream seed from a base seed and a stream id.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream_id) {
    std::uint64_t s = base_seed ^ (0xD1B54A32D192ED03ULL * (stream_id + 1));
    std::uint64_t a = splitmix64_next(s);
    std::uint64_t b = splitmix64_next(s);
    return a ^ (b << 1);
}

/// xoshiro256++ by Blackman and Vigna (public domain reference algorithm).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

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

    /// Uniform in [0, 1): 53 mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; never returns 0, safe as a log() argument.
    double next_double_open0() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// One standard-normal pair via the Box-Muller transform.
    void next_gaussian_pair(double& g0, double& g1) {
        const double u1 = next_double_open0();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        g0 = r * std::cos(phi);
        g1 = r * std::sin(phi);
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace cdc
