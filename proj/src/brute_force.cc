#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>

#include "gcoh/equivalence.h"

namespace gcoh {

namespace {

constexpr std::size_t kMaxModes = 3;
constexpr std::size_t kCandidatesPerPerm = 4;
constexpr int kLineSearchIters = 80;

struct Candidate {
    double score;
    std::vector<std::size_t> perm;
    std::vector<double> angles;

    bool operator<(const Candidate &other) const { return score < other.score; }
};

// Squared residual split into per-mode and per-pair terms, so the grid
// search only needs table lookups.
class GridTables {
  public:
    GridTables(const GaussianState &rho, const GaussianState &sigma, const std::vector<std::size_t> &perm,
               const std::vector<Eigen::Matrix2d> &rotations)
        : m_(rho.modes()), g_(rotations.size()) {
        unary_.assign(m_, std::vector<double>(g_));
        pair_.assign(m_ * m_, std::vector<double>());
        for (std::size_t i = 0; i < m_; ++i) {
            Eigen::Vector2d d = rho.mode_mean(i);
            Eigen::Vector2d d_target = sigma.mode_mean(perm[i]);
            Eigen::Matrix2d v = rho.block(i, i);
            Eigen::Matrix2d v_target = sigma.block(perm[i], perm[i]);
            for (std::size_t k = 0; k < g_; ++k) {
                const Eigen::Matrix2d &r = rotations[k];
                unary_[i][k] = (r * d - d_target).squaredNorm() + (r * v * r.transpose() - v_target).squaredNorm();
            }
            for (std::size_t j = i + 1; j < m_; ++j) {
                Eigen::Matrix2d c = rho.block(i, j);
                Eigen::Matrix2d c_target = sigma.block(perm[i], perm[j]);
                std::vector<double> &table = pair_[i * m_ + j];
                table.resize(g_ * g_);
                for (std::size_t k = 0; k < g_; ++k) {
                    Eigen::Matrix2d left = rotations[k] * c;
                    for (std::size_t l = 0; l < g_; ++l) {
                        // the (j, i) block contributes the same amount
                        table[k * g_ + l] = 2.0 * (left * rotations[l].transpose() - c_target).squaredNorm();
                    }
                }
            }
        }
    }

    double unary(std::size_t i, std::size_t k) const { return unary_[i][k]; }
    const double *pair_row(std::size_t i, std::size_t j, std::size_t k) const {
        return pair_[i * m_ + j].data() + k * g_;
    }

  private:
    std::size_t m_;
    std::size_t g_;
    std::vector<std::vector<double>> unary_;
    std::vector<std::vector<double>> pair_;
};

double smooth_residual(const GaussianState &rho, const GaussianState &sigma, const std::vector<std::size_t> &perm,
                       const std::vector<double> &angles) {
    IncoherentUnitary u(perm, angles);
    Eigen::MatrixXd mat = u.matrix();
    double cov = (mat * rho.cov() * mat.transpose() - sigma.cov()).squaredNorm();
    double mean = (mat * rho.mean() - sigma.mean()).squaredNorm();
    return std::sqrt(cov + mean);
}

double line_search(const std::function<double(double)> &f, double lo, double hi, double &best_x) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < kLineSearchIters; ++it) {
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
    best_x = f1 <= f2 ? x1 : x2;
    return std::min(f1, f2);
}

}  // namespace

EquivalenceVerdict brute_force_equivalence(const GaussianState &rho, const GaussianState &sigma,
                                           const BruteForceOptions &options) {
    if (rho.modes() != sigma.modes()) {
        throw Error(ErrorKind::shape_error, "states have different mode counts");
    }
    const std::size_t m = rho.modes();
    if (m > kMaxModes) {
        throw Error(ErrorKind::unsupported, "brute-force oracle supports at most 3 modes");
    }
    if (options.grid_size < 4) {
        throw Error(ErrorKind::invalid_argument, "grid_size must be at least 4");
    }
    const std::size_t g = options.grid_size;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(g);
    std::vector<Eigen::Matrix2d> rotations;
    for (std::size_t k = 0; k < g; ++k) {
        rotations.push_back(rotation(step * static_cast<double>(k)));
    }

    std::vector<Candidate> candidates;
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        GridTables tables(rho, sigma, perm, rotations);
        std::priority_queue<Candidate> keep;
        auto offer = [&](double score, std::initializer_list<std::size_t> idx) {
            if (keep.size() == kCandidatesPerPerm && score >= keep.top().score) {
                return;
            }
            Candidate c{score, perm, {}};
            for (std::size_t k : idx) {
                c.angles.push_back(step * static_cast<double>(k));
            }
            keep.push(std::move(c));
            if (keep.size() > kCandidatesPerPerm) {
                keep.pop();
            }
        };
        if (m == 1) {
            for (std::size_t k = 0; k < g; ++k) {
                offer(tables.unary(0, k), {k});
            }
        } else if (m == 2) {
            for (std::size_t k = 0; k < g; ++k) {
                const double *p01 = tables.pair_row(0, 1, k);
                for (std::size_t l = 0; l < g; ++l) {
                    offer(tables.unary(0, k) + tables.unary(1, l) + p01[l], {k, l});
                }
            }
        } else {
            std::vector<double> u2(g);
            for (std::size_t n = 0; n < g; ++n) {
                u2[n] = tables.unary(2, n);
            }
            for (std::size_t k = 0; k < g; ++k) {
                const double *p01 = tables.pair_row(0, 1, k);
                const double *p02 = tables.pair_row(0, 2, k);
                for (std::size_t l = 0; l < g; ++l) {
                    const double base = tables.unary(0, k) + tables.unary(1, l) + p01[l];
                    const double *p12 = tables.pair_row(1, 2, l);
                    double threshold = keep.size() == kCandidatesPerPerm ? keep.top().score
                                                                         : std::numeric_limits<double>::infinity();
                    for (std::size_t n = 0; n < g; ++n) {
                        double score = base + u2[n] + p02[n] + p12[n];
                        if (score < threshold) {
                            offer(score, {k, l, n});
                            threshold = keep.size() == kCandidatesPerPerm ? keep.top().score : threshold;
                        }
                    }
                }
            }
        }
        while (!keep.empty()) {
            candidates.push_back(keep.top());
            keep.pop();
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    const double abs_tol = scaled_tol(options.tol, rho.cov());
    double best = std::numeric_limits<double>::infinity();
    std::optional<IncoherentUnitary> best_u;
    for (Candidate &c : candidates) {
        double current = smooth_residual(rho, sigma, c.perm, c.angles);
        for (std::size_t round = 0; round < options.refine_iters && current > 1e-3 * abs_tol; ++round) {
            double before = current;
            for (std::size_t i = 0; i < m; ++i) {
                double center = c.angles[i];
                auto f = [&](double theta) {
                    std::vector<double> trial = c.angles;
                    trial[i] = theta;
                    return smooth_residual(rho, sigma, c.perm, trial);
                };
                double x = center;
                double value = line_search(f, center - step, center + step, x);
                if (value < current) {
                    current = value;
                    c.angles[i] = x;
                }
            }
            if (current >= before) {
                break;
            }
        }
        IncoherentUnitary u(c.perm, c.angles);
        double residual = certificate_residual(u, rho, sigma);
        if (residual < best) {
            best = residual;
            best_u = std::move(u);
        }
    }

    if (best_u && best <= abs_tol) {
        return Equivalent{std::move(*best_u), best};
    }
    return NotEquivalent{"search exhausted", best};
}

}  // namespace gcoh
