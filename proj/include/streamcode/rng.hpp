#pragma once

#include <cstdint>
#include <random>

namespace streamcode {

/// Seeded generator with distribution helpers whose output is fully
/// determined by the engine stream (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability num/den.
    bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    /// Derive an independent child seed (splitmix64 on the parent stream).
    std::uint64_t fork() {
        std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace streamcode
