#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gcoh/error.h"

namespace gcoh {

/// Default relative tolerance for state and channel checks.
inline constexpr double kDefaultTol = 1e-9;

/// Absolute threshold derived from a relative tolerance: tol * max(1, ||M||_F).
double scaled_tol(double tol, const Eigen::MatrixXd &m);

/// 2x2 rotation [[cos, sin], [-sin, cos]].
Eigen::Matrix2d rotation(double theta);

/// Omega = (+)_k [[0, 1], [-1, 0]].
class SymplecticForm {
  public:
    explicit SymplecticForm(std::size_t modes);

    std::size_t modes() const { return modes_; }
    const Eigen::MatrixXd &matrix() const { return matrix_; }

  private:
    std::size_t modes_;
    Eigen::MatrixXd matrix_;
};

SymplecticForm symplectic_form(std::size_t modes);

/// Symplectic eigenvalues, sorted ascending.
struct SymplecticSpectrum {
    std::vector<double> values;
};

/// Immutable m-mode Gaussian state (V, d) in (x1, p1, ..., xm, pm) ordering.
///
/// Only validate_state() creates instances, so every GaussianState has a
/// symmetric covariance satisfying V + i*Omega >= 0 up to the tolerance used.
/// Mode indices are 0-based.
class GaussianState {
  public:
    std::size_t modes() const { return static_cast<std::size_t>(mean_.size() / 2); }
    const Eigen::VectorXd &mean() const { return mean_; }
    const Eigen::MatrixXd &cov() const { return cov_; }

    /// V_ij, the 2x2 block at mode rows i and mode columns j.
    Eigen::Matrix2d block(std::size_t i, std::size_t j) const;
    /// V^(i), the local covariance of mode i.
    Eigen::Matrix2d mode_cov(std::size_t i) const { return block(i, i); }
    /// d_i, the local mean of mode i.
    Eigen::Vector2d mode_mean(std::size_t i) const;

  private:
    friend GaussianState validate_state(const Eigen::MatrixXd &, const Eigen::VectorXd &, double);
    GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd mean) : cov_(std::move(cov)), mean_(std::move(mean)) {}

    Eigen::MatrixXd cov_;
    Eigen::VectorXd mean_;
};

/// Checks shape, symmetry and the uncertainty relation, then symmetrizes.
///
/// Errors: shape_error, not_symmetric (asymmetry above the scaled tolerance),
/// uncertainty_violation (V not positive definite, or min symplectic
/// eigenvalue below 1 - scaled tolerance).
GaussianState validate_state(const Eigen::MatrixXd &cov, const Eigen::VectorXd &mean, double tol = kDefaultTol);

/// Symplectic eigenvalues of a raw positive-definite matrix, taken as the
/// moduli of the +-i*v eigenvalue pairs of Omega*M. Used directly for
/// matrices that are not states (e.g. partial transposes).
///
/// Throws numeric_error if the eigenvalues do not pair up within 1e-8
/// (relative to max(1, ||M||_F)).
SymplecticSpectrum symplectic_eigenvalues(const Eigen::MatrixXd &m);

SymplecticSpectrum williamson_spectrum(const GaussianState &state);

bool is_pure(const GaussianState &state, double tol = kDefaultTol);

/// Mean photon numbers if the state is a product of thermal states
/// (zero mean, zero off-diagonal blocks, isotropic local blocks).
std::optional<std::vector<double>> is_incoherent_state(const GaussianState &state, double tol = kDefaultTol);

/// rho (x) sigma: block-diagonal covariance, concatenated means.
GaussianState tensor_product(const GaussianState &a, const GaussianState &b);

}  // namespace gcoh
