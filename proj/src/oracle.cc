#include "gcoh/testing/oracle.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "gcoh/error.h"
#include "gcoh/state_zoo.h"

namespace gcoh::testing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPerturbAttempts = 200;

Eigen::Matrix2d local_squeezer(double r) {
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
    s(0, 0) = std::exp(r);
    s(1, 1) = std::exp(-r);
    return s;
}

void apply_local(Eigen::MatrixXd &s, std::size_t i, const Eigen::Matrix2d &g) {
    const Eigen::Index k = static_cast<Eigen::Index>(2 * i);
    s.middleRows(k, 2) = (g * s.middleRows(k, 2)).eval();
}

// Beam splitter and two-mode squeezer on modes (i, j), applied on the left.
void apply_mixer(Eigen::MatrixXd &s, std::size_t i, std::size_t j, double angle, double r) {
    const Eigen::Index a = static_cast<Eigen::Index>(2 * i);
    const Eigen::Index b = static_cast<Eigen::Index>(2 * j);
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    Eigen::MatrixXd top = s.middleRows(a, 2);
    Eigen::MatrixXd bottom = s.middleRows(b, 2);
    s.middleRows(a, 2) = c * top + sn * bottom;
    s.middleRows(b, 2) = -sn * top + c * bottom;

    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    Eigen::Matrix2d z = Eigen::Matrix2d::Zero();
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    top = s.middleRows(a, 2);
    bottom = s.middleRows(b, 2);
    s.middleRows(a, 2) = ch * top + sh * z * bottom;
    s.middleRows(b, 2) = sh * z * top + ch * bottom;
}

}  // namespace

GaussianState random_state(const RandomStateRecipe &recipe) {
    Rng rng(recipe.seed);
    return random_state(recipe, rng);
}

GaussianState random_state(const RandomStateRecipe &recipe, Rng &rng) {
    const std::size_t m = recipe.modes;
    if (m == 0) {
        throw Error(ErrorKind::invalid_argument, "recipe needs at least one mode");
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<bool> touched(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (coin(rng, recipe.coupling)) {
                edges.emplace_back(i, j);
                touched[i] = touched[j] = true;
            }
        }
    }
    if (recipe.hypothesis && m >= 2) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!touched[i]) {
                std::size_t j = uniform_index(rng, m - 1);
                j += j >= i ? 1 : 0;
                edges.emplace_back(std::min(i, j), std::max(i, j));
                touched[i] = touched[j] = true;
            }
        }
    }

    const Eigen::Index n = static_cast<Eigen::Index>(2 * m);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < m; ++i) {
        apply_local(s, i, rotation(uniform(rng, 0.0, kTwoPi)));
        apply_local(s, i, local_squeezer(uniform(rng, 0.0, recipe.local_squeeze_max)));
    }
    for (const auto &[i, j] : edges) {
        apply_mixer(s, i, j, uniform(rng, 0.2, 1.2), uniform(rng, 0.1, std::max(0.1, recipe.squeeze_max)));
    }
    for (std::size_t i = 0; i < m; ++i) {
        apply_local(s, i, local_squeezer(uniform(rng, 0.0, recipe.local_squeeze_max)));
        apply_local(s, i, rotation(uniform(rng, 0.0, kTwoPi)));
    }

    Eigen::VectorXd williamson(n);
    for (std::size_t i = 0; i < m; ++i) {
        double v = 1.0 + uniform(rng, 0.0, recipe.thermal_max);
        williamson(static_cast<Eigen::Index>(2 * i)) = v;
        williamson(static_cast<Eigen::Index>(2 * i + 1)) = v;
    }
    Eigen::MatrixXd cov = s * williamson.asDiagonal() * s.transpose();
    cov = (0.5 * (cov + cov.transpose())).eval();

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < m; ++i) {
        if (coin(rng, recipe.mean_fraction)) {
            double radius = uniform(rng, 0.3, 1.0) * recipe.mean_scale;
            double phase = uniform(rng, 0.0, kTwoPi);
            mean(static_cast<Eigen::Index>(2 * i)) = radius * std::cos(phase);
            mean(static_cast<Eigen::Index>(2 * i + 1)) = radius * std::sin(phase);
        }
    }
    return validate_state(cov, mean);
}

Eigen::MatrixXd random_symplectic(std::size_t modes, Rng &rng) {
    const Eigen::Index n = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < modes; ++i) {
        apply_local(s, i, local_squeezer(uniform(rng, -0.8, 0.8)) * rotation(uniform(rng, 0.0, kTwoPi)));
    }
    for (std::size_t i = 0; i < modes; ++i) {
        for (std::size_t j = i + 1; j < modes; ++j) {
            apply_mixer(s, i, j, uniform(rng, 0.0, kTwoPi), uniform(rng, -0.6, 0.6));
        }
    }
    for (std::size_t i = 0; i < modes; ++i) {
        apply_local(s, i, rotation(uniform(rng, 0.0, kTwoPi)));
    }
    return s;
}

IncoherentUnitary random_incoherent_unitary(std::size_t modes, Rng &rng) {
    std::vector<std::size_t> perm(modes);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = modes; k > 1; --k) {
        std::swap(perm[k - 1], perm[uniform_index(rng, k)]);
    }
    std::vector<double> angles(modes);
    for (double &a : angles) {
        a = uniform(rng, -std::numbers::pi, std::numbers::pi);
    }
    return IncoherentUnitary(std::move(perm), std::move(angles));
}

EquivalentPair equivalent_pair(const RandomStateRecipe &recipe) {
    Rng rng(recipe.seed);
    GaussianState rho = random_state(recipe, rng);
    IncoherentUnitary u = random_incoherent_unitary(recipe.modes, rng);
    GaussianState sigma = apply_incoherent_unitary(u, rho);
    return EquivalentPair{std::move(rho), std::move(sigma), std::move(u)};
}

GaussianState perturbed(const GaussianState &state, double magnitude, Rng &rng) {
    const std::size_t n = 2 * state.modes();
    for (int attempt = 0; attempt < kPerturbAttempts; ++attempt) {
        std::size_t r = uniform_index(rng, n);
        std::size_t c = uniform_index(rng, n - 1);
        c += c >= r ? 1 : 0;
        double delta = coin(rng, 0.5) ? magnitude : -magnitude;
        Eigen::MatrixXd cov = state.cov();
        const Eigen::Index ri = static_cast<Eigen::Index>(r);
        const Eigen::Index ci = static_cast<Eigen::Index>(c);
        cov(ri, ci) += delta;
        cov(ci, ri) = cov(ri, ci);
        try {
            return validate_state(cov, state.mean());
        } catch (const Error &) {
        }
    }
    throw Error(ErrorKind::numeric_error, "no physical perturbation found");
}

GaussianState random_thermal_product(std::size_t modes, double n_max, Rng &rng) {
    std::vector<double> n_bar(modes);
    for (double &x : n_bar) {
        x = uniform(rng, 0.0, n_max);
    }
    return thermal(n_bar);
}

}  // namespace gcoh::testing
