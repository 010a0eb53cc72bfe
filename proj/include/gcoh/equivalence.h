#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gcoh/channel.h"
#include "gcoh/gaussian_state.h"

namespace gcoh {

/// Default residual tolerance for equivalence decisions, relative to max(1, ||V||_F).
inline constexpr double kEquivalenceTol = 1e-8;

/// U = (P_pi (x) I2) * blkdiag(R(theta_0), ..., R(theta_{m-1})).
///
/// Mode i is rotated by R(theta_i) and moved to position perm[i]. Every block
/// is a proper rotation, so U is orthogonal and symplectic.
class IncoherentUnitary {
  public:
    /// Throws invalid_argument unless perm is a permutation of 0..m-1 and
    /// angles has the same length.
    IncoherentUnitary(std::vector<std::size_t> perm, std::vector<double> angles);

    static IncoherentUnitary identity(std::size_t modes);

    std::size_t modes() const { return perm_.size(); }
    const std::vector<std::size_t> &perm() const { return perm_; }
    const std::vector<double> &angles() const { return angles_; }

    Eigen::MatrixXd matrix() const;
    IncoherentUnitary inverse() const;

  private:
    std::vector<std::size_t> perm_;
    std::vector<double> angles_;
};

/// (U V U^t, U d).
GaussianState apply_incoherent_unitary(const IncoherentUnitary &u, const GaussianState &state,
                                       double tol = kDefaultTol);

/// max(||U V U^t - V'||_F, ||U d - d'||_2).
double certificate_residual(const IncoherentUnitary &u, const GaussianState &from, const GaussianState &to);

/// The unitary as a channel (T = U, N = 0, shift = 0).
GaussianChannel unitary_channel(const IncoherentUnitary &u);

struct HypothesisViolation {
    std::size_t mode = 0;
    std::string reason;
};

/// For m >= 2: the first mode whose off-diagonal blocks all vanish. For
/// m = 1: a violation when the state is incoherent (d = 0 and V = lambda I2).
std::optional<HypothesisViolation> check_hypothesis(const GaussianState &state, double tol = kEquivalenceTol);

struct Equivalent {
    IncoherentUnitary certificate;
    double residual = 0.0;
};

struct NotEquivalent {
    /// Name of the invariant that differs, or "search exhausted".
    std::string witness;
    /// Smallest certificate residual seen; +inf when no candidate was tried.
    double best_residual = 0.0;
};

/// Both states are thermal products, hence interconvertible by IGOs, though
/// no incoherent unitary need relate them.
struct AllIncoherent {};

struct HypothesisViolated {
    /// 0 for the first argument, 1 for the second.
    std::size_t state = 0;
    std::size_t mode = 0;
    std::string reason;
};

using EquivalenceVerdict = std::variant<Equivalent, NotEquivalent, AllIncoherent, HypothesisViolated>;

inline bool is_equivalent(const EquivalenceVerdict &verdict) {
    return std::holds_alternative<Equivalent>(verdict);
}

/// Decides whether two states are related by an incoherent Gaussian unitary.
///
/// Permutations are enumerated in lexicographic order, pruned by per-mode
/// invariants (local covariance eigenvalues, |d_i|, singular values of the
/// off-diagonal blocks). For each surviving permutation the rotation angles
/// are solved mode by mode: a nonzero local mean fixes an angle uniquely, an
/// anisotropic local covariance fixes it up to pi, and nonzero off-diagonal
/// blocks carry a solved angle to their neighbours by a 2-unknown least
/// squares problem. Graph components with no anchor at all are resolved by a
/// 1-D scan of one angle. The first permutation whose residual is within
/// tol * max(1, ||V||_F) is returned as the certificate.
///
/// Throws shape_error when mode counts differ.
EquivalenceVerdict decide_equivalence(const GaussianState &rho, const GaussianState &sigma,
                                      double tol = kEquivalenceTol);

struct BruteForceOptions {
    std::size_t grid_size = 360;
    /// Coordinate-descent rounds after the grid search.
    std::size_t refine_iters = 200;
    double tol = kEquivalenceTol;
};

/// Reference oracle for decide_equivalence: exhaustive search over all
/// permutations and a uniform angle grid, followed by golden-section
/// coordinate descent. Only Equivalent or NotEquivalent("search exhausted")
/// are returned. Throws unsupported for more than 3 modes.
EquivalenceVerdict brute_force_equivalence(const GaussianState &rho, const GaussianState &sigma,
                                           const BruteForceOptions &options = {});

struct FrozenReport {
    bool frozen = false;
    double c_before = 0.0;
    double c_after = 0.0;
    /// decide_equivalence(rho, channel(rho)), filled in when frozen.
    std::optional<EquivalenceVerdict> equivalence;
};

/// |C_R(channel(rho)) - C_R(rho)| <= tol for a strictly incoherent channel.
/// Throws invalid_argument for any other channel.
FrozenReport is_frozen(const GaussianState &rho, const GaussianChannel &channel, double tol = kEquivalenceTol);

}  // namespace gcoh
