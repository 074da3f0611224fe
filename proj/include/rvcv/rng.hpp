#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rvcv {

/// splitmix64 finalizer. Bijective on uint64, used both as a seed mixer and
/// to expand a single seed into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based derivation of a per-job seed from (master seed, iterate,
/// replicate). Pure function, so any job can be re-run in isolation and the
/// stream layout does not depend on scheduling. Each mixing stage is a
/// bijection of the running state, which keeps distinct (i, k) pairs on
/// distinct seeds in practice (checked statistically in the tests).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t iterate,
                                 std::uint64_t replicate) {
    std::uint64_t s = master;
    s += 0x9E3779B97F4A7C15ull * (iterate + 1);
    std::uint64_t a = s;
    std::uint64_t m1 = splitmix64(a);
    std::uint64_t b = m1 + 0xD1B54A32D192ED03ull * (replicate + 1);
    return splitmix64(b);
}

/// xoshiro256++ with explicit, portable output transforms for doubles and
/// normals. std::* distributions are implementation-defined, so everything
/// downstream of the raw bits is spelled out here; two runs with the same
/// seed produce bit-identical draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1): 53 random bits scaled.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe under log().
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. The spare draw is cached, so the
    /// mapping from the underlying bit stream to outputs is fixed given the
    /// sequence of calls.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double phi = 2.0 * std::numbers::pi * uniform01();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    /// Bernoulli with success probability p.
    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Multiply-shift; bias is O(n / 2^64), irrelevant at our n.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rvcv
