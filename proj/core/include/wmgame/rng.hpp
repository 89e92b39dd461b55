#pragma once

#include <cmath>
#include <cstdint>

namespace wmgame {

// splitmix64 finalizer. Stateless; used both as the generator step and as
// the sub-seed mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Sub-stream derivation: every (seed, stream, index) triple maps to an
// independent seed, so per-(seed, k) selection runs are reproducible
// point-wise regardless of iteration order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) {
    return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

// Seed streams used by the simulator.
inline constexpr std::uint64_t kStreamModel = 1;
inline constexpr std::uint64_t kStreamEstimate = 2;
inline constexpr std::uint64_t kStreamSelect = 3;
inline constexpr std::uint64_t kStreamWeights = 4;

// Minimal deterministic PRNG. splitmix64 passes BigCrush and is fully
// specified here, so identical seeds give identical streams on every
// platform and toolchain — standard-library distributions do not
// guarantee that.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n). Lemire's multiply-shift with
    // rejection. n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        for (;;) {
            std::uint64_t x = next();
            unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo < n) {
                std::uint64_t threshold = (0 - n) % n;
                if (lo < threshold) continue;
            }
            return static_cast<std::uint64_t>(m >> 64);
        }
    }

    // Standard normal via Box-Muller (cosine branch; two uniforms per
    // draw, no cached state).
    double normal() {
        double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace wmgame
