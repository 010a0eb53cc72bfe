#include "gcoh/coherence.h"

#include <cmath>

#include "gcoh/state_zoo.h"

namespace gcoh {

namespace {

// Occupations below this are exactly zero for entropy purposes.
constexpr double kLogFloor = 1e-300;

double x_log2_x(double x) {
    return x < kLogFloor ? 0.0 : x * std::log2(x);
}

}  // namespace

double bosonic_entropy(double x) {
    if (x < kLogFloor) {
        return 0.0;
    }
    return x_log2_x(x + 1.0) - x_log2_x(x);
}

std::vector<double> mean_photon_numbers(const GaussianState &state, double tol) {
    const double abs_tol = scaled_tol(tol, state.cov());
    std::vector<double> n_bar(state.modes());
    for (std::size_t i = 0; i < state.modes(); ++i) {
        double n = 0.25 * (state.mode_cov(i).trace() + state.mode_mean(i).squaredNorm() - 2.0);
        if (n < -abs_tol) {
            throw Error(ErrorKind::invariant_violation,
                        "negative mean photon number in mode " + std::to_string(i) + "; state is corrupted");
        }
        n_bar[i] = std::max(0.0, n);
    }
    return n_bar;
}

double von_neumann_entropy(const GaussianState &state) {
    double s = 0.0;
    for (double v : williamson_spectrum(state).values) {
        s += bosonic_entropy(0.5 * (v - 1.0));
    }
    return s;
}

CoherenceReport relative_entropy_coherence(const GaussianState &state, double tol) {
    std::vector<double> n_bar = mean_photon_numbers(state, tol);
    double entropy = von_neumann_entropy(state);
    double c = -entropy;
    for (double n : n_bar) {
        c += bosonic_entropy(n);
    }
    // Rounding can leave incoherent states a few ulps below zero.
    if (c < 0.0 && c >= -scaled_tol(tol, state.cov())) {
        c = 0.0;
    }
    GaussianState reference = thermal(n_bar);
    return CoherenceReport{std::move(n_bar), entropy, c, std::move(reference)};
}

double relative_entropy_to_thermal(const GaussianState &state, std::span<const double> n_ref) {
    if (n_ref.size() != state.modes()) {
        throw Error(ErrorKind::shape_error, "reference occupations must have one entry per mode");
    }
    std::vector<double> n_bar = mean_photon_numbers(state);
    double value = -von_neumann_entropy(state);
    for (std::size_t i = 0; i < n_bar.size(); ++i) {
        if (!(n_ref[i] > 0.0)) {
            throw Error(ErrorKind::invalid_argument, "thermal reference occupations must be positive");
        }
        value += (n_bar[i] + 1.0) * std::log2(n_ref[i] + 1.0) - n_bar[i] * std::log2(n_ref[i]);
    }
    return value;
}

}  // namespace gcoh
