#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace gcoh {

/// Engine used by every randomized generator. Callers own the state.
using Rng = std::mt19937_64;

// The std distributions are implementation-defined, which would make seeded
// fixtures differ between standard libraries. These draw directly from the
// engine's (fully specified) output.

/// Uniform double in [lo, hi).
inline double uniform(Rng &rng, double lo, double hi) {
    double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

/// Uniform index in [0, n), n > 0.
inline std::size_t uniform_index(Rng &rng, std::size_t n) {
    return static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
}

inline bool coin(Rng &rng, double p_true) {
    return uniform(rng, 0.0, 1.0) < p_true;
}

}  // namespace gcoh
