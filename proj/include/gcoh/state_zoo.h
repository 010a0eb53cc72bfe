#pragma once

#include <complex>
#include <span>
#include <utility>

#include "gcoh/gaussian_state.h"

namespace gcoh {

/// Product of thermal states, V = (+)(2 n_i + 1) I2, d = 0.
GaussianState thermal(std::span<const double> n_bars);

/// Parameters of D(alpha) S(beta)|0>, alpha = |alpha| e^{i gamma}, beta = |beta| e^{i theta}.
struct DisplacedSqueezedParams {
    std::complex<double> alpha;
    std::complex<double> beta;
};

/// Pure one-mode state with d = 2 (Re alpha, Im alpha) and
/// V = ch(2|beta|) I + sh(2|beta|) [[cos theta, sin theta], [sin theta, -cos theta]].
GaussianState displaced_squeezed(const DisplacedSqueezedParams &params);

/// Closed-form incoherent-equivalence test for two displaced squeezed states:
/// |alpha| = |alpha'|, |beta| = |beta'| and theta' - theta = 2 (gamma' - gamma) mod 2 pi.
/// The phase condition is dropped when |beta| = 0, and gamma drops out when |alpha| = 0.
bool displaced_squeezed_equivalent(const DisplacedSqueezedParams &p, const DisplacedSqueezedParams &q,
                                   double tol = 1e-9);

/// Two-mode standard form V = [[a I2, C], [C, b I2]] with C = diag(c, d_corr).
struct StandardFormParams {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
    double d_corr = 0.0;
};

/// Assembles and validates the standard-form covariance (no validation of
/// the mean beyond its length). Throws uncertainty_violation for
/// unphysical parameters.
GaussianState two_mode_standard_form(const StandardFormParams &params,
                                     const Eigen::Vector4d &mean = Eigen::Vector4d::Zero(), double tol = kDefaultTol);

/// Raw standard-form matrix, optionally partially transposed (C -> diag(c, -d_corr)).
Eigen::Matrix4d standard_form_matrix(const StandardFormParams &params, bool partial_transpose = false);

struct StandardFormSpectra {
    double v_plus;
    double v_minus;
    /// Spectrum of the partial transpose. pt_v_minus is the quantity that
    /// fixes the entanglement of formation of symmetric (a = b) states.
    double pt_v_plus;
    double pt_v_minus;
};

/// v_pm = sqrt((Delta +- sqrt(Delta^2 - 4 det V)) / 2), Delta = a^2 + b^2 + 2 c d_corr;
/// partial transpose uses Delta~ = a^2 + b^2 - 2 c d_corr.
StandardFormSpectra standard_form_spectra(const StandardFormParams &params, double tol = kDefaultTol);

/// The two members of the incoherent-equivalence class of a standard-form
/// state for rotations O_k = R(theta_k):
///   first:  V1 = [[a I, O1 C O2^t], [O2 C O1^t, b I]], d = (O1 d1, O2 d2)
///   second: V2 = [[b I, O1 C O2^t], [O2 C O1^t, a I]], d = (O1 d2, O2 d1)
/// Throws invalid_argument unless the state has isotropic local blocks and a
/// diagonal correlation block.
std::pair<GaussianState, GaussianState> equivalence_class_samples(const GaussianState &state, double theta1,
                                                                  double theta2, double tol = kDefaultTol);

}  // namespace gcoh
