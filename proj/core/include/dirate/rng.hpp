#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dirate {

/// splitmix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Derives an independent stream seed for a shard/trial index from a
/// master seed. Distinct indices give unrelated streams, so parallel
/// Monte Carlo shards are reproducible regardless of scheduling.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Deterministic sampler: mt19937_64 (engine output is fixed by the
/// standard) combined with explicit 53-bit uniforms and inverse-CDF
/// categorical draws. Identical seeds give identical streams on every
/// platform; no std::*_distribution is used anywhere.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Index drawn from an (unnormalized tolerated) pmf by cumulative walk.
    int categorical(std::span<const double> pmf) {
        double u = uniform();
        double acc = 0.0;
        const int last = static_cast<int>(pmf.size()) - 1;
        for (int i = 0; i < last; ++i) {
            acc += pmf[i];
            if (u < acc) return i;
        }
        return last;
    }

    std::uint64_t next_word() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace dirate
