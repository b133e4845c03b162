#pragma once

#include <cstdint>
#include <random>

#include "relzkp/errors.hpp"

namespace relzkp {

// SplitMix64 mixing step; used only for deriving child seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    return splitmix64(splitmix64(seed) ^ splitmix64(label ^ 0xa5a5a5a5a5a5a5a5ull));
}

// Deterministic seeded RNG. mt19937_64 is fully specified by the standard, so
// identical seeds give identical streams on every platform. Instances are
// single-owner; independent streams come from fork(), never from sharing.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased draw from [0, n) by rejection. Avoids
    // std::uniform_int_distribution, whose algorithm is implementation-defined.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw InvalidParameter("uniform_below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [-range, +range]. Consumes one draw even when range is 0
    // so stream positions stay config-independent.
    double uniform_symmetric(double range) { return (2.0 * uniform_unit() - 1.0) * range; }

    // Child stream derived from the original seed and a label; independent of
    // how many values the parent has produced.
    SeededRng fork(std::uint64_t label) const { return SeededRng(derive_seed(seed_, label)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace relzkp
