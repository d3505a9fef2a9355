#pragma once

#include <cstdint>
#include <random>

namespace sensrec {

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the distributions below are written
/// out here (std:: distributions are implementation-defined), so a seed
/// reproduces the same draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased by rejection.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller; draws two uniforms per call.
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace sensrec
