#pragma once

#include <cstdint>
#include <random>

namespace tgeom {

/// Seeded sampler with a bit-exact output sequence on every platform.
/// std::mt19937_64 is fully specified by the standard; the std distributions
/// are not, so the real-valued mapping is done here.
class SeededSampler {
public:
    explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n) (n > 0), rejection-free multiply-shift.
    std::uint64_t index(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tgeom
