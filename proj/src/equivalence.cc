#include "gcoh/equivalence.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "gcoh/coherence.h"

namespace gcoh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// A propagated (cos, sin) pair this far off the unit circle cannot belong to a solution.
constexpr double kUnitCircleTol = 1e-4;
// Invariant witnesses only fire well outside the residual tolerance; closer
// cases are left to the certificate search.
constexpr double kWitnessMargin = 100.0;
constexpr std::size_t kScanPoints = 360;
constexpr std::size_t kScanRefinements = 3;
constexpr int kGoldenIters = 100;

Eigen::Index at(std::size_t mode) {
    return static_cast<Eigen::Index>(2 * mode);
}

double angle_of(const Eigen::Vector2d &v) {
    return std::atan2(v(1), v(0));
}

// Orientation of the major axis of a symmetric 2x2 matrix.
double axis_angle(const Eigen::Matrix2d &a) {
    return 0.5 * std::atan2(2.0 * a(0, 1), a(0, 0) - a(1, 1));
}

// Ascending eigenvalues of a symmetric 2x2 matrix.
Eigen::Vector2d local_eigenvalues(const Eigen::Matrix2d &a) {
    double mid = 0.5 * (a(0, 0) + a(1, 1));
    double radius = std::hypot(0.5 * (a(0, 0) - a(1, 1)), a(0, 1));
    return {mid - radius, mid + radius};
}

double wrap_angle(double x) {
    double y = std::remainder(x, 2.0 * std::numbers::pi);
    return y <= -std::numbers::pi ? y + 2.0 * std::numbers::pi : y;
}

bool close(const Eigen::Vector2d &a, const Eigen::Vector2d &b, double tol) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// Golden-section minimization of f on [lo, hi].
std::pair<double, double> golden_minimize(const std::function<double(double)> &f, double lo, double hi) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < kGoldenIters && hi - lo > 1e-15; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

/// Blocks and per-mode invariants of one state.
struct StateData {
    explicit StateData(const GaussianState &state) : m(state.modes()) {
        blocks.resize(m * m);
        singular.resize(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            means.push_back(state.mode_mean(i));
            mean_norms.push_back(means.back().norm());
            for (std::size_t j = 0; j < m; ++j) {
                blocks[i * m + j] = state.block(i, j);
                singular[i * m + j] = Eigen::JacobiSVD<Eigen::Matrix2d>(blocks[i * m + j]).singularValues();
            }
            local_eigs.push_back(local_eigenvalues(blocks[i * m + i]));
        }
    }

    const Eigen::Matrix2d &block(std::size_t i, std::size_t j) const { return blocks[i * m + j]; }
    const Eigen::Vector2d &sv(std::size_t i, std::size_t j) const { return singular[i * m + j]; }
    double gap(std::size_t i) const { return local_eigs[i](1) - local_eigs[i](0); }

    std::size_t m;
    std::vector<Eigen::Matrix2d> blocks;
    std::vector<Eigen::Vector2d> singular;
    std::vector<Eigen::Vector2d> means;
    std::vector<double> mean_norms;
    std::vector<Eigen::Vector2d> local_eigs;
};

// Tolerance-banded multiset comparison of the singular values of the blocks
// incident to mode i of `a` and mode k of `b`.
bool incident_blocks_match(const StateData &a, std::size_t i, const StateData &b, std::size_t k, double tol) {
    std::vector<Eigen::Vector2d> pool;
    for (std::size_t l = 0; l < b.m; ++l) {
        if (l != k) {
            pool.push_back(b.sv(k, l));
        }
    }
    for (std::size_t j = 0; j < a.m; ++j) {
        if (j == i) {
            continue;
        }
        auto hit = std::find_if(pool.begin(), pool.end(),
                                [&](const Eigen::Vector2d &candidate) { return close(candidate, a.sv(i, j), tol); });
        if (hit == pool.end()) {
            return false;
        }
        pool.erase(hit);
    }
    return true;
}

bool fingerprints_match(const StateData &a, std::size_t i, const StateData &b, std::size_t k, double tol) {
    return close(a.local_eigs[i], b.local_eigs[k], tol) && std::abs(a.mean_norms[i] - b.mean_norms[k]) <= tol &&
           incident_blocks_match(a, i, b, k, tol);
}

/// Solves the rotation angles for one fixed permutation.
class AngleSolver {
  public:
    AngleSolver(const StateData &rho, const StateData &sigma, const std::vector<std::size_t> &perm, double abs_tol)
        : rho_(rho), sigma_(sigma), perm_(perm), abs_tol_(abs_tol) {}

    std::vector<double> solve() const {
        std::vector<double> angles(rho_.m, 0.0);
        for (const auto &component : components()) {
            solve_component(component, angles);
        }
        return angles;
    }

  private:
    bool linked(std::size_t i, std::size_t j) const { return i != j && rho_.block(i, j).norm() > abs_tol_; }

    std::vector<std::vector<std::size_t>> components() const {
        std::vector<std::vector<std::size_t>> result;
        std::vector<bool> seen(rho_.m, false);
        for (std::size_t start = 0; start < rho_.m; ++start) {
            if (seen[start]) {
                continue;
            }
            std::vector<std::size_t> component{start};
            seen[start] = true;
            for (std::size_t head = 0; head < component.size(); ++head) {
                for (std::size_t j = 0; j < rho_.m; ++j) {
                    if (!seen[j] && linked(component[head], j)) {
                        seen[j] = true;
                        component.push_back(j);
                    }
                }
            }
            result.push_back(std::move(component));
        }
        return result;
    }

    // Angle of mode u from the solved neighbour s: R(theta_s) V_su R(theta_u)^t = V'_{pi(s) pi(u)}
    // is linear in (cos theta_u, sin theta_u). With A = R(theta_s) V_su and
    // R(theta_u)^t = c I - s J, the columns A and A J are orthogonal, so the
    // least-squares solution is a pair of projections.
    std::optional<double> angle_from_edge(std::size_t s, std::size_t u, double theta_s, bool check_circle) const {
        static const Eigen::Matrix2d kJ = (Eigen::Matrix2d() << 0.0, 1.0, -1.0, 0.0).finished();
        Eigen::Matrix2d a = rotation(theta_s) * rho_.block(s, u);
        const Eigen::Matrix2d &b = sigma_.block(perm_[s], perm_[u]);
        double norm_sq = a.squaredNorm();
        if (norm_sq == 0.0) {
            return std::nullopt;
        }
        double c = (a.array() * b.array()).sum() / norm_sq;
        double sn = -((a * kJ).array() * b.array()).sum() / norm_sq;
        double radius = std::hypot(c, sn);
        if (radius == 0.0 || (check_circle && std::abs(radius - 1.0) > kUnitCircleTol)) {
            return std::nullopt;
        }
        return std::atan2(sn, c);
    }

    double mean_angle(std::size_t i) const {
        return angle_of(rho_.means[i]) - angle_of(sigma_.means[perm_[i]]);
    }

    // Fills the component's angles starting from `root`, always solving next
    // the unsolved mode with the strongest determination (its own mean, or a
    // link to a solved mode).
    bool propagate(const std::vector<std::size_t> &component, std::size_t root, double root_angle,
                   std::vector<double> &angles, bool check_circle) const {
        std::vector<bool> solved(rho_.m, false);
        angles[root] = root_angle;
        solved[root] = true;
        for (std::size_t count = 1; count < component.size(); ++count) {
            double best_strength = 0.0;
            std::size_t best_mode = 0;
            std::optional<std::size_t> best_source;
            bool found = false;
            for (std::size_t u : component) {
                if (solved[u]) {
                    continue;
                }
                if (rho_.mean_norms[u] > abs_tol_ && rho_.mean_norms[u] > best_strength) {
                    best_strength = rho_.mean_norms[u];
                    best_mode = u;
                    best_source.reset();
                    found = true;
                }
                for (std::size_t s : component) {
                    if (solved[s] && linked(s, u) && rho_.block(s, u).norm() > best_strength) {
                        best_strength = rho_.block(s, u).norm();
                        best_mode = u;
                        best_source = s;
                        found = true;
                    }
                }
            }
            if (!found) {
                return false;
            }
            if (best_source) {
                auto theta = angle_from_edge(*best_source, best_mode, angles[*best_source], check_circle);
                if (!theta) {
                    return false;
                }
                angles[best_mode] = *theta;
            } else {
                angles[best_mode] = mean_angle(best_mode);
            }
            solved[best_mode] = true;
        }
        return true;
    }

    double component_residual(const std::vector<std::size_t> &component, const std::vector<double> &angles) const {
        double total = 0.0;
        for (std::size_t i : component) {
            Eigen::Matrix2d ri = rotation(angles[i]);
            total += (ri * rho_.means[i] - sigma_.means[perm_[i]]).squaredNorm();
            for (std::size_t j : component) {
                total += (ri * rho_.block(i, j) * rotation(angles[j]).transpose() - sigma_.block(perm_[i], perm_[j]))
                             .squaredNorm();
            }
        }
        return std::sqrt(total);
    }

    void solve_component(const std::vector<std::size_t> &component, std::vector<double> &angles) const {
        double best = kInf;
        std::vector<double> best_angles = angles;
        auto consider = [&](std::size_t root, double root_angle, bool check_circle) {
            std::vector<double> trial = angles;
            if (!propagate(component, root, root_angle, trial, check_circle)) {
                return kInf;
            }
            double residual = component_residual(component, trial);
            if (residual < best) {
                best = residual;
                best_angles = std::move(trial);
            }
            return residual;
        };

        auto by_mean = std::max_element(component.begin(), component.end(), [&](std::size_t x, std::size_t y) {
            return rho_.mean_norms[x] < rho_.mean_norms[y];
        });
        auto by_gap = std::max_element(component.begin(), component.end(),
                                       [&](std::size_t x, std::size_t y) { return rho_.gap(x) < rho_.gap(y); });
        if (rho_.mean_norms[*by_mean] > abs_tol_) {
            consider(*by_mean, mean_angle(*by_mean), true);
        } else if (rho_.gap(*by_gap) > abs_tol_) {
            std::size_t root = *by_gap;
            double theta = axis_angle(rho_.block(root, root)) - axis_angle(sigma_.block(perm_[root], perm_[root]));
            consider(root, theta, true);
            consider(root, theta + std::numbers::pi, true);
        }

        if (best > abs_tol_) {
            scan(component, consider);
        }
        angles = std::move(best_angles);
    }

    // 1-D scan over the angle of the most strongly linked mode, then
    // golden-section refinement around the best grid points.
    template <class Consider>
    void scan(const std::vector<std::size_t> &component, Consider &consider) const {
        std::size_t root = component.front();
        double strongest = -1.0;
        for (std::size_t i : component) {
            double strength = 0.0;
            for (std::size_t j : component) {
                if (linked(i, j)) {
                    strength += rho_.block(i, j).norm();
                }
            }
            if (strength > strongest) {
                strongest = strength;
                root = i;
            }
        }
        const double step = 2.0 * std::numbers::pi / static_cast<double>(kScanPoints);
        std::vector<std::pair<double, double>> grid;
        grid.reserve(kScanPoints);
        for (std::size_t k = 0; k < kScanPoints; ++k) {
            double theta = step * static_cast<double>(k);
            grid.emplace_back(consider(root, theta, false), theta);
        }
        std::partial_sort(grid.begin(), grid.begin() + kScanRefinements, grid.end());
        for (std::size_t k = 0; k < kScanRefinements; ++k) {
            double center = grid[k].second;
            golden_minimize([&](double theta) { return consider(root, theta, false); }, center - step,
                            center + step);
        }
    }

    const StateData &rho_;
    const StateData &sigma_;
    const std::vector<std::size_t> &perm_;
    double abs_tol_;
};

}  // namespace

IncoherentUnitary::IncoherentUnitary(std::vector<std::size_t> perm, std::vector<double> angles)
    : perm_(std::move(perm)), angles_(std::move(angles)) {
    if (perm_.empty() || perm_.size() != angles_.size()) {
        throw Error(ErrorKind::invalid_argument, "incoherent unitary needs one angle per mode");
    }
    std::vector<bool> hit(perm_.size(), false);
    for (std::size_t target : perm_) {
        if (target >= perm_.size() || hit[target]) {
            throw Error(ErrorKind::invalid_argument, "perm is not a permutation of 0..m-1");
        }
        hit[target] = true;
    }
    for (double theta : angles_) {
        if (!std::isfinite(theta)) {
            throw Error(ErrorKind::invalid_argument, "rotation angles must be finite");
        }
    }
}

IncoherentUnitary IncoherentUnitary::identity(std::size_t modes) {
    std::vector<std::size_t> perm(modes);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    return IncoherentUnitary(std::move(perm), std::vector<double>(modes, 0.0));
}

Eigen::MatrixXd IncoherentUnitary::matrix() const {
    auto n = static_cast<Eigen::Index>(2 * modes());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < modes(); ++i) {
        u.block<2, 2>(at(perm_[i]), at(i)) = rotation(angles_[i]);
    }
    return u;
}

IncoherentUnitary IncoherentUnitary::inverse() const {
    std::vector<std::size_t> perm(modes());
    std::vector<double> angles(modes());
    for (std::size_t i = 0; i < modes(); ++i) {
        perm[perm_[i]] = i;
        angles[perm_[i]] = -angles_[i];
    }
    return IncoherentUnitary(std::move(perm), std::move(angles));
}

GaussianState apply_incoherent_unitary(const IncoherentUnitary &u, const GaussianState &state, double tol) {
    if (u.modes() != state.modes()) {
        throw Error(ErrorKind::shape_error, "unitary and state mode counts differ");
    }
    Eigen::MatrixXd mat = u.matrix();
    return validate_state(mat * state.cov() * mat.transpose(), mat * state.mean(), tol);
}

double certificate_residual(const IncoherentUnitary &u, const GaussianState &from, const GaussianState &to) {
    if (u.modes() != from.modes() || u.modes() != to.modes()) {
        throw Error(ErrorKind::shape_error, "unitary and state mode counts differ");
    }
    Eigen::MatrixXd mat = u.matrix();
    double cov_residual = (mat * from.cov() * mat.transpose() - to.cov()).norm();
    double mean_residual = (mat * from.mean() - to.mean()).norm();
    return std::max(cov_residual, mean_residual);
}

GaussianChannel unitary_channel(const IncoherentUnitary &u) {
    auto n = static_cast<Eigen::Index>(2 * u.modes());
    return validate_channel(u.matrix(), Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n));
}

std::optional<HypothesisViolation> check_hypothesis(const GaussianState &state, double tol) {
    const double abs_tol = scaled_tol(tol, state.cov());
    const std::size_t m = state.modes();
    if (m == 1) {
        Eigen::Matrix2d v = state.mode_cov(0);
        double lambda = 0.5 * v.trace();
        if (state.mean().norm() <= abs_tol && (v - lambda * Eigen::Matrix2d::Identity()).norm() <= abs_tol) {
            return HypothesisViolation{0, "one-mode state is incoherent (d = 0, V = lambda I)"};
        }
        return std::nullopt;
    }
    for (std::size_t i = 0; i < m; ++i) {
        bool coupled = false;
        for (std::size_t j = 0; j < m && !coupled; ++j) {
            coupled = j != i && state.block(i, j).norm() > abs_tol;
        }
        if (!coupled) {
            return HypothesisViolation{i, "all off-diagonal blocks of mode " + std::to_string(i) + " vanish"};
        }
    }
    return std::nullopt;
}

EquivalenceVerdict decide_equivalence(const GaussianState &rho, const GaussianState &sigma, double tol) {
    if (rho.modes() != sigma.modes()) {
        throw Error(ErrorKind::shape_error, "states have different mode counts");
    }
    const std::size_t m = rho.modes();
    bool rho_incoherent = is_incoherent_state(rho, tol).has_value();
    bool sigma_incoherent = is_incoherent_state(sigma, tol).has_value();
    if (rho_incoherent && sigma_incoherent) {
        return AllIncoherent{};
    }
    if (rho_incoherent || sigma_incoherent) {
        return NotEquivalent{"coherence mismatch", kInf};
    }
    if (m >= 2) {
        if (auto violation = check_hypothesis(rho, tol)) {
            return HypothesisViolated{0, violation->mode, violation->reason};
        }
        if (auto violation = check_hypothesis(sigma, tol)) {
            return HypothesisViolated{1, violation->mode, violation->reason};
        }
    }

    const double abs_tol = scaled_tol(tol, rho.cov());
    const double witness_tol = kWitnessMargin * abs_tol;
    std::vector<double> spec_rho = williamson_spectrum(rho).values;
    std::vector<double> spec_sigma = williamson_spectrum(sigma).values;
    for (std::size_t k = 0; k < m; ++k) {
        if (std::abs(spec_rho[k] - spec_sigma[k]) > witness_tol) {
            return NotEquivalent{"symplectic spectrum", kInf};
        }
    }
    double c_rho = relative_entropy_coherence(rho).c_rel_ent;
    double c_sigma = relative_entropy_coherence(sigma).c_rel_ent;
    if (std::abs(c_rho - c_sigma) > witness_tol) {
        return NotEquivalent{"relative entropy of coherence", kInf};
    }

    const StateData a(rho);
    const StateData b(sigma);
    std::vector<std::vector<bool>> compatible(m, std::vector<bool>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            compatible[i][k] = fingerprints_match(a, i, b, k, abs_tol);
        }
    }

    std::vector<std::size_t> perm(m);
    std::vector<bool> used(m, false);
    double best = kInf;
    bool any_candidate = false;
    std::optional<Equivalent> found;

    // Lexicographic depth-first enumeration of permutations consistent with
    // the fingerprints and with pairwise block singular values.
    std::function<void(std::size_t)> extend = [&](std::size_t depth) {
        if (found) {
            return;
        }
        if (depth == m) {
            any_candidate = true;
            std::vector<double> angles = AngleSolver(a, b, perm, abs_tol).solve();
            for (double &theta : angles) {
                theta = wrap_angle(theta);
            }
            IncoherentUnitary u(perm, std::move(angles));
            double residual = certificate_residual(u, rho, sigma);
            best = std::min(best, residual);
            if (residual <= abs_tol) {
                found = Equivalent{std::move(u), residual};
            }
            return;
        }
        for (std::size_t k = 0; k < m && !found; ++k) {
            if (used[k] || !compatible[depth][k]) {
                continue;
            }
            bool consistent = true;
            for (std::size_t i = 0; i < depth && consistent; ++i) {
                consistent = close(a.sv(i, depth), b.sv(perm[i], k), abs_tol);
            }
            if (!consistent) {
                continue;
            }
            used[k] = true;
            perm[depth] = k;
            extend(depth + 1);
            used[k] = false;
        }
    };
    extend(0);

    if (found) {
        return *found;
    }
    if (!any_candidate) {
        return NotEquivalent{"mode fingerprints", kInf};
    }
    return NotEquivalent{"search exhausted", best};
}

FrozenReport is_frozen(const GaussianState &rho, const GaussianChannel &channel, double tol) {
    if (!std::holds_alternative<StrictlyIncoherent>(classify_incoherent(channel))) {
        throw Error(ErrorKind::invalid_argument, "frozen-coherence check needs a strictly incoherent channel");
    }
    GaussianState output = apply_channel(channel, rho);
    FrozenReport report;
    report.c_before = relative_entropy_coherence(rho).c_rel_ent;
    report.c_after = relative_entropy_coherence(output).c_rel_ent;
    report.frozen = std::abs(report.c_after - report.c_before) <= tol;
    if (report.frozen) {
        report.equivalence = decide_equivalence(rho, output, tol);
    }
    return report;
}

}  // namespace gcoh
