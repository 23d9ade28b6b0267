#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hansim::rng {

/// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d9d2d1f1f4b0a7ULL;
    return x ^ (x >> 31);
}

/// One independent random stream per (seed, purpose) pair. Workload and
/// network draws use distinct purposes so that changing the loss model never
/// perturbs the generated request trace, and vice versa.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t purpose)
        : engine_(mix(mix(seed) ^ mix(purpose ^ 0xa02bdbf7bb3c0a7ULL))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution. Hand-rolled instead of
    /// std::uniform_real_distribution so the byte-level output is pinned by
    /// the mt19937_64 standardization alone.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // multiply-shift; bias is negligible for the small n used here
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    /// Exponential holding time with the given mean.
    double next_exponential(double mean) { return -std::log1p(-next_unit()) * mean; }

private:
    std::mt19937_64 engine_;
};

// Fixed purpose ids; new purposes must get new ids, never reuse.
inline constexpr std::uint64_t kPurposeNetwork = 2;
inline constexpr std::uint64_t kPurposeArrivalBase = 0x100;

}  // namespace hansim::rng
