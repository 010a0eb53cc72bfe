#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gcoh/channel.h"
#include "gcoh/coherence.h"
#include "gcoh/equivalence.h"
#include "gcoh/state_zoo.h"
#include "gcoh/testing/oracle.h"
#include "support.h"

namespace gcoh {
namespace {

using test_support::kind_of;
constexpr double kPi = std::numbers::pi;

GaussianState coherent(double re, double im) {
    return displaced_squeezed({{re, im}, {0.0, 0.0}});
}

void expect_sound(const EquivalenceVerdict &v, const GaussianState &rho, const GaussianState &sigma,
                  double tol = kEquivalenceTol) {
    ASSERT_TRUE(is_equivalent(v)) << "verdict index " << v.index();
    const Equivalent &e = std::get<Equivalent>(v);
    double residual = certificate_residual(e.certificate, rho, sigma);
    EXPECT_NEAR(residual, e.residual, 1e-12);
    EXPECT_LE(residual, tol * std::max(1.0, rho.cov().norm()));
    GaussianState image = apply_incoherent_unitary(e.certificate, rho);
    EXPECT_LE((image.cov() - sigma.cov()).norm(), tol * std::max(1.0, rho.cov().norm()));
}

TEST(IncoherentUnitary, RejectsBadPermutations) {
    EXPECT_EQ(kind_of([] { IncoherentUnitary({0, 0}, {0.0, 0.0}); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([] { IncoherentUnitary({0, 2}, {0.0, 0.0}); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([] { IncoherentUnitary({0, 1}, {0.0}); }), ErrorKind::invalid_argument);
}

TEST(IncoherentUnitary, OrthogonalSymplecticWithProperBlocks) {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        std::size_t m = 1 + uniform_index(rng, 5);
        IncoherentUnitary u = testing::random_incoherent_unitary(m, rng);
        Eigen::MatrixXd mat = u.matrix();
        const Eigen::Index n = mat.rows();
        EXPECT_TRUE((mat * mat.transpose() - Eigen::MatrixXd::Identity(n, n)).isZero(1e-14));
        Eigen::MatrixXd omega = symplectic_form(m).matrix();
        EXPECT_TRUE((mat * omega * mat.transpose() - omega).isZero(1e-14));
        for (std::size_t j = 0; j < m; ++j) {
            Eigen::Matrix2d block = mat.block(static_cast<Eigen::Index>(2 * u.perm()[j]),
                                              static_cast<Eigen::Index>(2 * j), 2, 2);
            EXPECT_NEAR(block.determinant(), 1.0, 1e-14);
        }
        Eigen::MatrixXd inv = u.inverse().matrix();
        EXPECT_TRUE((inv * mat - Eigen::MatrixXd::Identity(n, n)).isZero(1e-14));
    }
}

TEST(ApplyIncoherentUnitary, Identity) {
    testing::RandomStateRecipe recipe;
    recipe.modes = 3;
    GaussianState s = testing::random_state(recipe);
    GaussianState t = apply_incoherent_unitary(IncoherentUnitary::identity(3), s);
    EXPECT_EQ(t.cov(), s.cov());
    EXPECT_EQ(t.mean(), s.mean());
}

TEST(ApplyIncoherentUnitary, QuarterTurn) {
    GaussianState t = apply_incoherent_unitary(IncoherentUnitary({0}, {kPi / 2}), coherent(1.0, 0.0));
    EXPECT_NEAR(t.mean()(0), 0.0, 1e-15);
    EXPECT_NEAR(t.mean()(1), -2.0, 1e-15);
    EXPECT_TRUE(t.cov().isApprox(Eigen::MatrixXd::Identity(2, 2)));
}

TEST(ApplyIncoherentUnitary, SwapExchangesModes) {
    GaussianState s = two_mode_standard_form({2.0, 3.0, 0.5, -0.25}, Eigen::Vector4d(1, 2, 3, 4));
    Eigen::Matrix2d corr = s.block(0, 1);
    corr(0, 1) = 0.0;
    GaussianState t = apply_incoherent_unitary(IncoherentUnitary({1, 0}, {0.0, 0.0}), s);
    EXPECT_EQ(t.mode_cov(0), s.mode_cov(1));
    EXPECT_EQ(t.mode_cov(1), s.mode_cov(0));
    EXPECT_EQ(t.block(0, 1), s.block(0, 1).transpose());
    EXPECT_EQ(t.mode_mean(0), s.mode_mean(1));
}

TEST(ApplyIncoherentUnitary, ModeMismatch) {
    EXPECT_EQ(kind_of([] { apply_incoherent_unitary(IncoherentUnitary::identity(2), coherent(1.0, 0.0)); }),
              ErrorKind::shape_error);
}

TEST(Hypothesis, Examples) {
    EXPECT_FALSE(check_hypothesis(two_mode_standard_form({2.0, 2.0, 0.5, 0.5})).has_value());
    auto v = check_hypothesis(two_mode_standard_form({2.0, 3.0, 0.0, 0.0}, Eigen::Vector4d(1, 0, 0, 0)));
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->mode, 0u);
    EXPECT_FALSE(check_hypothesis(displaced_squeezed({{0.0, 0.0}, {0.4, 0.0}})).has_value());
    std::vector<double> one{1.0};
    EXPECT_TRUE(check_hypothesis(thermal(one)).has_value());
}

TEST(Decide, SwapWithAngles) {
    testing::RandomStateRecipe recipe;
    recipe.modes = 2;
    recipe.seed = 3;
    recipe.hypothesis = true;
    recipe.mean_fraction = 1.0;
    GaussianState rho = testing::random_state(recipe);
    IncoherentUnitary u({1, 0}, {kPi / 3, kPi / 7});
    GaussianState sigma = apply_incoherent_unitary(u, rho);
    EquivalenceVerdict v = decide_equivalence(rho, sigma);
    expect_sound(v, rho, sigma);
    EXPECT_LE(std::get<Equivalent>(v).residual, 1e-10);
}

TEST(Decide, DifferentSpectra) {
    GaussianState a = two_mode_standard_form({2.0, 2.0, 0.5, 0.5});
    GaussianState b = two_mode_standard_form({2.0, 2.0, 0.5, 0.6});
    EquivalenceVerdict v = decide_equivalence(a, b);
    ASSERT_TRUE(std::holds_alternative<NotEquivalent>(v));
    EXPECT_EQ(std::get<NotEquivalent>(v).witness, "symplectic spectrum");
}

TEST(Decide, DisplacedSqueezedCriterionInstance) {
    GaussianState a = displaced_squeezed({{1.0, 0.0}, {0.5, 0.0}});
    GaussianState b = displaced_squeezed({{0.0, 1.0}, std::polar(0.5, kPi)});
    expect_sound(decide_equivalence(a, b), a, b);
}

TEST(Decide, CoherentVersusThermal) {
    std::vector<double> one{1.0};
    EquivalenceVerdict v = decide_equivalence(coherent(1.0, 0.0), thermal(one));
    ASSERT_TRUE(std::holds_alternative<NotEquivalent>(v));
    EXPECT_EQ(std::get<NotEquivalent>(v).witness, "coherence mismatch");
    EquivalenceVerdict w = decide_equivalence(thermal(one), coherent(1.0, 0.0));
    EXPECT_EQ(std::get<NotEquivalent>(w).witness, "coherence mismatch");
}

TEST(Decide, BothIncoherent) {
    std::vector<double> a{1.0, 2.0};
    std::vector<double> b{0.5, 0.0};
    EXPECT_TRUE(std::holds_alternative<AllIncoherent>(decide_equivalence(thermal(a), thermal(b))));
}

TEST(Decide, HypothesisViolatedReportsStateAndMode) {
    GaussianState ok = two_mode_standard_form({2.0, 2.0, 0.5, 0.5});
    GaussianState product = two_mode_standard_form({2.0, 3.0, 0.0, 0.0}, Eigen::Vector4d(0, 0, 1, 0));
    EquivalenceVerdict v = decide_equivalence(ok, product);
    ASSERT_TRUE(std::holds_alternative<HypothesisViolated>(v));
    EXPECT_EQ(std::get<HypothesisViolated>(v).state, 1u);
    EXPECT_EQ(std::get<HypothesisViolated>(v).mode, 0u);
}

TEST(Decide, ModeCountMismatch) {
    EXPECT_EQ(kind_of([] { decide_equivalence(coherent(1.0, 0.0), two_mode_standard_form({2.0, 2.0, 0.5, 0.5})); }),
              ErrorKind::shape_error);
}

TEST(Decide, OneModeRotatedSqueezed) {
    GaussianState a = displaced_squeezed({{0.0, 0.0}, {0.7, 0.0}});
    GaussianState b = validate_state(rotation(0.3) * a.cov() * rotation(0.3).transpose(), Eigen::VectorXd::Zero(2));
    EquivalenceVerdict v = decide_equivalence(a, b);
    expect_sound(v, a, b);
    double theta = std::get<Equivalent>(v).certificate.angles()[0];
    // the squeezed vacuum is symmetric under a half turn
    double wrapped = std::remainder(theta - 0.3, kPi);
    EXPECT_NEAR(wrapped, 0.0, 1e-8);
}

TEST(Decide, IsotropicZeroMeanFamilyUsesScan) {
    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 2 + uniform_index(rng, 3);
        recipe.seed = rng();
        recipe.hypothesis = true;
        recipe.local_squeeze_max = 0.0;
        recipe.mean_fraction = 0.0;
        testing::EquivalentPair pair = testing::equivalent_pair(recipe);
        expect_sound(decide_equivalence(pair.rho, pair.sigma), pair.rho, pair.sigma);
    }
}

TEST(Decide, StandardFormClassMembers) {
    Rng rng(42);
    for (int i = 0; i < 30; ++i) {
        double a = uniform(rng, 1.2, 3.0);
        double b = coin(rng, 0.3) ? a : uniform(rng, 1.2, 3.0);
        double c = uniform(rng, -0.5, 0.5);
        double d = uniform(rng, -0.5, 0.5);
        Eigen::Vector4d mean = Eigen::Vector4d::Zero();
        if (coin(rng, 0.5)) {
            mean << uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1);
        }
        GaussianState s = two_mode_standard_form({a, b, c, d}, mean);
        auto [first, second] = equivalence_class_samples(s, uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi));
        expect_sound(decide_equivalence(s, first), s, first);
        expect_sound(decide_equivalence(s, second), s, second);
    }
}

TEST(Decide, PlantedPairsAreRecovered) {
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 2 + uniform_index(rng, 5);
        recipe.seed = rng();
        recipe.hypothesis = true;
        recipe.coupling = uniform(rng, 0.0, 1.0);
        recipe.mean_fraction = uniform(rng, 0.0, 1.0);
        recipe.local_squeeze_max = coin(rng, 0.3) ? 0.0 : 0.5;
        testing::EquivalentPair pair = testing::equivalent_pair(recipe);
        expect_sound(decide_equivalence(pair.rho, pair.sigma), pair.rho, pair.sigma);
    }
}

TEST(Decide, PerturbedPairsAreRejected) {
    Rng rng(44);
    for (int i = 0; i < 100; ++i) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 2 + uniform_index(rng, 5);
        recipe.seed = rng();
        recipe.hypothesis = true;
        testing::EquivalentPair pair = testing::equivalent_pair(recipe);
        GaussianState sigma = testing::perturbed(pair.sigma, testing::kPerturbation, rng);
        EquivalenceVerdict v = decide_equivalence(pair.rho, sigma);
        EXPECT_TRUE(std::holds_alternative<NotEquivalent>(v)) << i << " verdict " << v.index();
    }
}

TEST(Decide, Symmetry) {
    Rng rng(45);
    for (int i = 0; i < 60; ++i) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 1 + uniform_index(rng, 4);
        recipe.seed = rng();
        recipe.hypothesis = true;
        testing::EquivalentPair pair = testing::equivalent_pair(recipe);
        GaussianState sigma = coin(rng, 0.5) ? pair.sigma : testing::perturbed(pair.sigma, 0.05, rng);
        EquivalenceVerdict ab = decide_equivalence(pair.rho, sigma);
        EquivalenceVerdict ba = decide_equivalence(sigma, pair.rho);
        ASSERT_EQ(ab.index(), ba.index()) << i;
        if (is_equivalent(ab)) {
            IncoherentUnitary back = std::get<Equivalent>(ba).certificate;
            // composing the two certificates fixes rho
            GaussianState round = apply_incoherent_unitary(back, apply_incoherent_unitary(
                                                                     std::get<Equivalent>(ab).certificate, pair.rho));
            EXPECT_LE((round.cov() - pair.rho.cov()).norm(), 2 * kEquivalenceTol * std::max(1.0, pair.rho.cov().norm()));
        }
    }
}

TEST(Decide, EquivalentImpliesEqualCoherence) {
    Rng rng(46);
    for (int i = 0; i < 50; ++i) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 1 + uniform_index(rng, 4);
        recipe.seed = rng();
        recipe.hypothesis = true;
        testing::EquivalentPair pair = testing::equivalent_pair(recipe);
        ASSERT_TRUE(is_equivalent(decide_equivalence(pair.rho, pair.sigma)));
        EXPECT_NEAR(relative_entropy_coherence(pair.rho).c_rel_ent, relative_entropy_coherence(pair.sigma).c_rel_ent,
                    1e-8);
    }
}

TEST(BruteForce, AgreesOnPlantedAndPerturbed) {
    Rng rng(47);
    for (int i = 0; i < 20; ++i) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 1 + uniform_index(rng, 3);
        recipe.seed = rng();
        recipe.hypothesis = true;
        testing::EquivalentPair pair = testing::equivalent_pair(recipe);
        GaussianState sigma = i % 2 == 0 ? pair.sigma : testing::perturbed(pair.sigma, 0.05, rng);
        EquivalenceVerdict fast = decide_equivalence(pair.rho, sigma);
        EquivalenceVerdict slow = brute_force_equivalence(pair.rho, sigma);
        EXPECT_EQ(is_equivalent(fast), is_equivalent(slow)) << i;
        EXPECT_EQ(is_equivalent(fast), i % 2 == 0) << i;
        if (is_equivalent(slow)) {
            expect_sound(slow, pair.rho, sigma);
        }
    }
}

TEST(BruteForce, OneModeRotation) {
    GaussianState a = displaced_squeezed({{0.4, 0.1}, {0.7, 0.0}});
    GaussianState b = apply_incoherent_unitary(IncoherentUnitary({0}, {0.3}), a);
    EquivalenceVerdict v = brute_force_equivalence(a, b);
    expect_sound(v, a, b);
    EXPECT_NEAR(std::remainder(std::get<Equivalent>(v).certificate.angles()[0] - 0.3, 2 * kPi), 0.0, 1e-7);
}

TEST(BruteForce, Limits) {
    testing::RandomStateRecipe recipe;
    recipe.modes = 4;
    GaussianState s = testing::random_state(recipe);
    EXPECT_EQ(kind_of([&] { brute_force_equivalence(s, s); }), ErrorKind::unsupported);
    BruteForceOptions tiny;
    tiny.grid_size = 2;
    EXPECT_EQ(kind_of([&] { brute_force_equivalence(coherent(1, 0), coherent(1, 0), tiny); }),
              ErrorKind::invalid_argument);
}

TEST(Frozen, UnitaryIsFrozen) {
    testing::RandomStateRecipe recipe;
    recipe.modes = 3;
    recipe.seed = 9;
    recipe.hypothesis = true;
    GaussianState rho = testing::random_state(recipe);
    FrozenReport r = is_frozen(rho, unitary_channel(IncoherentUnitary({2, 0, 1}, {0.1, 0.2, 0.3})));
    EXPECT_TRUE(r.frozen);
    EXPECT_NEAR(r.c_after, r.c_before, 1e-9);
    ASSERT_TRUE(r.equivalence.has_value());
    EXPECT_TRUE(is_equivalent(*r.equivalence));
}

TEST(Frozen, AttenuatorLosesCoherence) {
    GaussianChannel c =
        validate_channel(0.5 * Eigen::MatrixXd::Identity(2, 2), 0.75 * Eigen::MatrixXd::Identity(2, 2),
                         Eigen::VectorXd::Zero(2));
    FrozenReport r = is_frozen(coherent(1.0, 0.0), c);
    EXPECT_FALSE(r.frozen);
    EXPECT_NEAR(r.c_before, 2.0, 1e-12);
    EXPECT_LT(r.c_after, r.c_before);
    EXPECT_FALSE(r.equivalence.has_value());
}

TEST(Frozen, RequiresStrictChannel) {
    Rng rng(48);
    GaussianChannel merge = random_igo(2, false, rng);
    EXPECT_EQ(kind_of([&] { is_frozen(two_mode_standard_form({2.0, 2.0, 0.5, 0.5}), merge); }),
              ErrorKind::invalid_argument);
}

TEST(Frozen, AgreesWithEquivalence) {
    Rng rng(49);
    for (int i = 0; i < 60; ++i) {
        std::size_t m = 1 + uniform_index(rng, 3);
        testing::RandomStateRecipe recipe;
        recipe.modes = m;
        recipe.seed = rng();
        recipe.hypothesis = true;
        GaussianState rho = testing::random_state(recipe);
        GaussianChannel phi = i % 3 == 0 ? unitary_channel(testing::random_incoherent_unitary(m, rng))
                                         : random_igo(m, true, rng);
        FrozenReport r = is_frozen(rho, phi);
        EXPECT_EQ(r.frozen, is_equivalent(decide_equivalence(rho, apply_channel(phi, rho)))) << i;
    }
}

}  // namespace
}  // namespace gcoh
