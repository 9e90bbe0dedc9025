#pragma once

#include <cmath>
#include <cstdint>

namespace seis {

// splitmix64 step (Vigna). Used both as a stream generator and as a hash
// finalizer for deriving per-fiber stream seeds.
inline uint64_t splitmix64_next(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (b * 0xC2B2AE3D27D4EB4Full + 0x165667B19E3779F9ull);
    splitmix64_next(s);
    return splitmix64_next(s);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

// Counter-based stream: cheap to construct, deterministic, no global state.
struct SplitMix64 {
    uint64_t state = 0;

    SplitMix64() = default;
    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() { return splitmix64_next(state); }

    // Uniform in (0,1); never returns 0 or 1 exactly.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    // Exponential with the given rate (rate > 0).
    double exponential(double rate) { return -std::log(u01()) / rate; }
};

}  // namespace seis
