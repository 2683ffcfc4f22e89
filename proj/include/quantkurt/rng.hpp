#pragma once

#include <cstdint>
#include <random>

namespace quantkurt {

/// SplitMix64 finalizer; used to spread (seed, index) pairs over the state space.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// A seeded uniform stream. The bit-level output is fixed by the standard
/// (mt19937_64) and by the open-interval conversion below, so results do not
/// depend on the standard library's distribution implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Independent stream for replicate `index` of a study seeded with `master`.
    static Stream derive(std::uint64_t master, std::uint64_t index) {
        return Stream(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    }

    /// Uniform draw in the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t bits() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace quantkurt
