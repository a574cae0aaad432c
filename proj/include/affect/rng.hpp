#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace affect {

// Deterministic random source. All draws go through mt19937_64 whose output
// sequence is fixed by the standard, and the integer-to-double conversions
// below are exact arithmetic, so a seed pins the stream across platforms.
// std::uniform_real_distribution and std::shuffle are implementation-defined
// and must not be used anywhere in this codebase.
class RngState {
public:
    explicit RngState(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return counter_; }
    static const char* algorithm() { return "mt19937-64"; }

    std::uint64_t next_u64() {
        ++counter_;
        return engine_();
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] via rejection-free modulo over a wide range;
    // bias is negligible for the small ranges used here, and the draw count
    // stays fixed, which keeps streams reproducible.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return lo + next_u64() % (hi - lo + 1);
    }

    // Box-Muller, one value per call (no spare caching so the draw count
    // stays a pure function of call count).
    double normal(double mean = 0.0, double stddev = 1.0);

    // Independent stream derived from (seed, stream_id) by splitmix64 mixing.
    RngState derive(std::uint64_t stream_id) const;

private:
    std::uint64_t seed_ = 0;
    std::mt19937_64 engine_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace affect
