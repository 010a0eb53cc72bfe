#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "gcoh/gaussian_state.h"
#include "gcoh/random.h"

namespace gcoh {

/// Gaussian channel d -> T d + shift, V -> T V T^t + N.
///
/// Created through validate_channel(), which enforces N = N^t and complete
/// positivity N + i(Omega - T Omega T^t) >= 0.
class GaussianChannel {
  public:
    std::size_t modes() const { return static_cast<std::size_t>(shift_.size() / 2); }
    const Eigen::MatrixXd &transfer() const { return transfer_; }
    const Eigen::MatrixXd &noise() const { return noise_; }
    const Eigen::VectorXd &shift() const { return shift_; }

  private:
    friend GaussianChannel validate_channel(const Eigen::MatrixXd &, const Eigen::MatrixXd &, const Eigen::VectorXd &,
                                            double);
    GaussianChannel(Eigen::MatrixXd t, Eigen::MatrixXd n, Eigen::VectorXd shift)
        : transfer_(std::move(t)), noise_(std::move(n)), shift_(std::move(shift)) {}

    Eigen::MatrixXd transfer_;
    Eigen::MatrixXd noise_;
    Eigen::VectorXd shift_;
};

/// Minimum eigenvalue of the Hermitian matrix N + i(Omega - T Omega T^t).
double complete_positivity_margin(const Eigen::MatrixXd &t, const Eigen::MatrixXd &n);

GaussianChannel validate_channel(const Eigen::MatrixXd &t, const Eigen::MatrixXd &n, const Eigen::VectorXd &shift,
                                 double tol = kDefaultTol);

/// Throws shape_error when mode counts differ.
GaussianState apply_channel(const GaussianChannel &channel, const GaussianState &state, double tol = kDefaultTol);

/// One column pair of an incoherent T: the block scale * orientation sits at
/// rows of mode `target` and columns of mode `source`.
struct IgoBlock {
    std::size_t source = 0;
    std::size_t target = 0;
    double scale = 0.0;
    Eigen::Matrix2d orientation = Eigen::Matrix2d::Identity();

    double orientation_det() const { return orientation.determinant() < 0.0 ? -1.0 : 1.0; }
};

/// Parsed structure of an incoherent Gaussian operation; blocks[j].source == j.
struct IgoSpec {
    std::vector<IgoBlock> blocks;
    std::vector<double> noise;
    bool strict = false;

    std::size_t modes() const { return blocks.size(); }
};

struct NotIncoherent {
    std::string reason;
};
struct Incoherent {
    IgoSpec spec;
};
struct StrictlyIncoherent {
    IgoSpec spec;
};
using IgoClassification = std::variant<NotIncoherent, Incoherent, StrictlyIncoherent>;

/// Recognizes the block structure T = {t_j O_j}, N = (+) w_j I2, shift = 0,
/// w_j >= |1 - sum_{r(k)=j} t_k^2 det O_k|. Strictly incoherent when every
/// target mode receives exactly one column pair.
IgoClassification classify_incoherent(const GaussianChannel &channel, double tol = kDefaultTol);

/// nullptr when the classification is NotIncoherent.
const IgoSpec *igo_spec(const IgoClassification &classification);

/// Lower bound on w_j for each target mode implied by the blocks.
std::vector<double> igo_noise_bounds(const std::vector<IgoBlock> &blocks);

/// Builds (T, N, 0) from an IgoSpec and validates it.
GaussianChannel igo_channel(const IgoSpec &spec, double tol = kDefaultTol);

/// Random (strictly) incoherent channel: t_j uniform in [0, 1.2], O_j uniform
/// in O(2), w_j = bound + jitter (jitter is zero a quarter of the time).
/// With strict = false and modes >= 2 the target map is never injective.
GaussianChannel random_igo(std::size_t modes, bool strict, Rng &rng);

/// Petz recovery channel of an incoherent `channel` with respect to the
/// thermal reference `reference` (all occupations > 0):
///   T_psi = (+) sqrt((2n_i+1)^2 - 1) I2 * T^t * (+) I2 / sqrt((2k_i+1)^2 - 1)
///   N_psi = V_ref - T_psi V_out T_psi^t
/// where k_i are the occupations of channel(reference).
///
/// Errors: invalid_argument (channel not incoherent, reference not a faithful
/// thermal state), not_faithful (some k_i <= 1e-12), numeric_error (the
/// recovery map is not an incoherent CP channel, as happens for non-strict
/// channels).
GaussianChannel petz_recovery(const GaussianChannel &channel, const GaussianState &reference,
                              double tol = kDefaultTol);

}  // namespace gcoh
