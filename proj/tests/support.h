#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gcoh/coherence.h"
#include "gcoh/error.h"

namespace gcoh::test_support {

inline ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    throw std::logic_error("expected a gcoh::Error");
}

/// Minimum of relative_entropy_to_thermal over reference occupations, found
/// by a log-spaced grid on [1e-9, 1e4] per mode followed by repeated zooming
/// around the best grid point. Knows nothing about the closed form.
inline double grid_minimum(const GaussianState &state, int points = 21, int zooms = 24) {
    const std::size_t m = state.modes();
    std::vector<double> lo(m, std::log(1e-9));
    std::vector<double> hi(m, std::log(1e4));
    std::vector<double> best_x(m, 0.0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> n_ref(m);
    std::vector<int> idx(m, 0);
    for (int zoom = 0; zoom <= zooms; ++zoom) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < m; ++i) {
                double t = static_cast<double>(idx[i]) / (points - 1);
                n_ref[i] = std::exp(lo[i] + t * (hi[i] - lo[i]));
            }
            double value = relative_entropy_to_thermal(state, n_ref);
            if (value < best) {
                best = value;
                for (std::size_t i = 0; i < m; ++i) {
                    best_x[i] = std::log(n_ref[i]);
                }
            }
            std::size_t k = 0;
            while (k < m && ++idx[k] == points) {
                idx[k++] = 0;
            }
            if (k == m) {
                break;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            double half = 2.0 * (hi[i] - lo[i]) / (points - 1);
            lo[i] = best_x[i] - half;
            hi[i] = best_x[i] + half;
        }
    }
    return best;
}

}  // namespace gcoh::test_support
