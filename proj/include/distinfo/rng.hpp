#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "distinfo/errors.hpp"

namespace distinfo {

// splitmix64 finalizer; used to derive independent sub-stream seeds so that
// per-trial / per-restart results do not depend on execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Thin wrapper around std::mt19937_64 that avoids the standard distribution
// classes (their algorithms are not pinned by the standard); the raw engine
// plus the conversions below are bit-stable across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::size_t below(std::size_t n) {
        if (n == 0) throw contract_error("Rng::below: n must be positive");
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    bool coin() { return (engine_() >> 63) != 0; }

    // Index drawn from the distribution given by `weights` (need not be
    // pre-normalized beyond summing to ~1; last bucket absorbs roundoff).
    std::size_t categorical(const std::vector<double>& weights) {
        const double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace distinfo
