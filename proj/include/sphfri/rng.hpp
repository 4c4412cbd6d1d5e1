#pragma once

#include <cstdint>
#include <random>

namespace sphfri {

// One SplitMix64 step. Used to derive statistically independent child seeds
// (per trial, per sweep point) from a single root seed.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic uniform generator. The mt19937_64 output sequence is fixed by
// the C++ standard and the [0,1) mapping below keeps only the top 53 bits, so
// streams reproduce bit-for-bit across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sphfri
