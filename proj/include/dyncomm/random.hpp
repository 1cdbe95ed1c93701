#pragma once

#include <cstdint>
#include <random>

namespace dyncomm {

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the derived draws below avoid the
// implementation-defined std distributions so a seed reproduces the same run
// on every toolchain.
class Rng {
public:
    // Consecutive user seeds are scattered with a splitmix64 step first; raw
    // small integers give measurably correlated early outputs across seeds.
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection on the top of the range keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace dyncomm
