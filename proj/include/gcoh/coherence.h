#pragma once

#include <span>
#include <vector>

#include "gcoh/gaussian_state.h"

namespace gcoh {

/// Relative entropy of coherence together with its ingredients. All entropies are in bits.
struct CoherenceReport {
    std::vector<double> n_bar;
    double entropy = 0.0;
    double c_rel_ent = 0.0;
    /// Closest incoherent state, the thermal product with the same occupations.
    GaussianState reference;
};

/// g(x) = (x + 1) log2(x + 1) - x log2 x, with g(0) = 0.
double bosonic_entropy(double x);

/// n_i = (tr V^(i) + |d^(i)|^2 - 2) / 4. Values in [-tol, 0) are clamped to
/// zero; anything lower raises invariant_violation.
std::vector<double> mean_photon_numbers(const GaussianState &state, double tol = kDefaultTol);

/// S(rho) = sum_i g((v_i - 1) / 2).
double von_neumann_entropy(const GaussianState &state);

/// C_R(rho) = -S(rho) + sum_i g(n_i).
CoherenceReport relative_entropy_coherence(const GaussianState &state, double tol = kDefaultTol);

/// S(rho || (x)_i thermal(n_ref_i)) = -S(rho) + sum_i [(n_i + 1) log2(n'_i + 1) - n_i log2 n'_i].
/// Its minimum over n_ref is C_R, attained at n_ref = mean_photon_numbers(rho).
double relative_entropy_to_thermal(const GaussianState &state, std::span<const double> n_ref);

}  // namespace gcoh
