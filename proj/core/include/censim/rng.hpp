#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace censim {

// xoshiro256++ generator seeded through splitmix64.
//
// Substreams: substream(seed, k) seeds the state from the k-th disjoint
// 4-word splitmix64 window of the master seed, so streams with the same seed
// but different k never share state words and are independent for practical
// purposes. RngStream(seed) is exactly substream(seed, 0).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

    static RngStream substream(std::uint64_t seed, std::uint64_t k) {
        return RngStream(seed, k);
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

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

    RngStream(std::uint64_t seed, std::uint64_t k) {
        // Start splitmix64 at the k-th window of four increments.
        std::uint64_t sm = seed + 4ULL * k * kSplitmixGamma;
        for (auto& w : s_) w = splitmix64(sm);
        // All-zero state is the one invalid xoshiro state.
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kSplitmixGamma;
    }

    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += kSplitmixGamma);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

// Uniform draw on [a, b).
inline double uniform(RngStream& rng, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
    return a + (b - a) * rng.next_double();
}

} // namespace censim
