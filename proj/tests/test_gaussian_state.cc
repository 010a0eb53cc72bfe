#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gcoh/error.h"
#include "gcoh/gaussian_state.h"
#include "gcoh/state_zoo.h"
#include "gcoh/testing/oracle.h"

namespace gcoh {
namespace {

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no gcoh::Error thrown";
    return ErrorKind::invalid_argument;
}

TEST(SymplecticForm, OneMode) {
    Eigen::Matrix2d expected;
    expected << 0, 1, -1, 0;
    EXPECT_EQ(symplectic_form(1).matrix(), Eigen::MatrixXd(expected));
}

TEST(SymplecticForm, TwoModesIsDirectSum) {
    Eigen::MatrixXd omega = symplectic_form(2).matrix();
    Eigen::MatrixXd one = symplectic_form(1).matrix();
    EXPECT_EQ(omega.block(0, 0, 2, 2), one);
    EXPECT_EQ(omega.block(2, 2, 2, 2), one);
    EXPECT_TRUE(omega.block(0, 2, 2, 2).isZero());
    EXPECT_TRUE(omega.block(2, 0, 2, 2).isZero());
}

TEST(SymplecticForm, SquaresToMinusIdentity) {
    Eigen::MatrixXd omega = symplectic_form(3).matrix();
    EXPECT_TRUE((omega * omega + Eigen::MatrixXd::Identity(6, 6)).isZero());
    EXPECT_TRUE((omega.transpose() + omega).isZero());
}

TEST(SymplecticForm, ZeroModesRejected) {
    EXPECT_EQ(kind_of([] { symplectic_form(0); }), ErrorKind::invalid_argument);
}

TEST(ValidateState, Vacuum) {
    GaussianState s = validate_state(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
    EXPECT_EQ(s.modes(), 1u);
    EXPECT_TRUE(is_pure(s));
}

TEST(ValidateState, SubVacuumRejected) {
    try {
        validate_state(0.5 * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::uncertainty_violation);
        EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
    }
}

TEST(ValidateState, SqueezedVacuum) {
    const double r = 0.6;
    Eigen::MatrixXd v = Eigen::Vector2d(std::exp(2 * r), std::exp(-2 * r)).asDiagonal();
    GaussianState s = validate_state(v, Eigen::VectorXd::Zero(2));
    EXPECT_NEAR(s.cov().determinant(), 1.0, 1e-12);
    EXPECT_NEAR(williamson_spectrum(s).values[0], 1.0, 1e-12);
}

TEST(ValidateState, ShapeErrors) {
    EXPECT_EQ(kind_of([] { validate_state(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3)); }),
              ErrorKind::shape_error);
    EXPECT_EQ(kind_of([] { validate_state(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(4)); }),
              ErrorKind::shape_error);
    EXPECT_EQ(kind_of([] { validate_state(Eigen::MatrixXd::Identity(2, 4), Eigen::VectorXd::Zero(2)); }),
              ErrorKind::shape_error);
    EXPECT_EQ(kind_of([] { validate_state(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)); }), ErrorKind::shape_error);
}

TEST(ValidateState, AsymmetryRejectedAboveTolerance) {
    Eigen::MatrixXd v = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    v(0, 1) = 1e-3;
    EXPECT_EQ(kind_of([&] { validate_state(v, Eigen::VectorXd::Zero(2)); }), ErrorKind::not_symmetric);
}

TEST(ValidateState, TinyAsymmetrySymmetrized) {
    Eigen::MatrixXd v = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    v(0, 1) = 1e-12;
    GaussianState s = validate_state(v, Eigen::VectorXd::Zero(2));
    EXPECT_EQ(s.cov()(0, 1), s.cov()(1, 0));
    EXPECT_DOUBLE_EQ(s.cov()(0, 1), 5e-13);
}

TEST(ValidateState, NonFiniteRejected) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(2, 2);
    v(0, 0) = std::nan("");
    EXPECT_EQ(kind_of([&] { validate_state(v, Eigen::VectorXd::Zero(2)); }), ErrorKind::invalid_argument);
}

TEST(ValidateState, PositiveDefiniteButUnphysical) {
    // a = b = 1 with correlations: V > 0 yet v_- < 1
    Eigen::MatrixXd v = standard_form_matrix({1.0, 1.0, 0.5, 0.5});
    EXPECT_EQ(kind_of([&] { validate_state(v, Eigen::VectorXd::Zero(4)); }), ErrorKind::uncertainty_violation);
}

TEST(ValidateState, RoundTripIsIdentity) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 1 + static_cast<std::size_t>(trial % 4);
        GaussianState s = testing::random_state(recipe, rng);
        GaussianState again = validate_state(s.cov(), s.mean());
        EXPECT_EQ(again.cov(), s.cov());
        EXPECT_EQ(again.mean(), s.mean());
    }
}

TEST(Blocks, Accessors) {
    Eigen::MatrixXd v = standard_form_matrix({2.0, 3.0, 0.5, -0.25});
    Eigen::VectorXd d(4);
    d << 1, 2, 3, 4;
    GaussianState s = validate_state(v, d);
    EXPECT_EQ(s.mode_cov(1), Eigen::Matrix2d(3.0 * Eigen::Matrix2d::Identity()));
    EXPECT_EQ(s.block(0, 1), Eigen::Matrix2d(Eigen::Vector2d(0.5, -0.25).asDiagonal()));
    EXPECT_EQ(s.mode_mean(1), Eigen::Vector2d(3, 4));
}

TEST(Williamson, TwoModeVacuum) {
    GaussianState s = validate_state(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4));
    std::vector<double> v = williamson_spectrum(s).values;
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v[0], 1.0, 1e-12);
    EXPECT_NEAR(v[1], 1.0, 1e-12);
}

TEST(Williamson, Thermal) {
    std::vector<double> n{1.0};
    EXPECT_NEAR(williamson_spectrum(thermal(n)).values[0], 3.0, 1e-12);
}

TEST(Williamson, PureTwoModeStandardForm) {
    const double c = std::sqrt(3.0);
    GaussianState s = two_mode_standard_form({2.0, 2.0, c, -c});
    std::vector<double> v = williamson_spectrum(s).values;
    EXPECT_NEAR(v[0], 1.0, 1e-9);
    EXPECT_NEAR(v[1], 1.0, 1e-9);
}

TEST(Williamson, SortedAscending) {
    std::vector<double> n{3.0, 0.5, 1.0};
    std::vector<double> v = williamson_spectrum(thermal(n)).values;
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    EXPECT_NEAR(v[0], 2.0, 1e-12);
    EXPECT_NEAR(v[2], 7.0, 1e-12);
}

TEST(WilliamsonProperty, ProductOfSquaresIsDeterminant) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 1 + uniform_index(rng, 5);
        GaussianState s = testing::random_state(recipe, rng);
        double product = 1.0;
        for (double v : williamson_spectrum(s).values) {
            product *= v * v;
        }
        double det = s.cov().determinant();
        EXPECT_NEAR(product / det, 1.0, 1e-9) << "trial " << trial;
    }
}

TEST(WilliamsonProperty, InvariantUnderSymplecticConjugation) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        testing::RandomStateRecipe recipe;
        recipe.modes = 1 + uniform_index(rng, 4);
        GaussianState s = testing::random_state(recipe, rng);
        Eigen::MatrixXd u = testing::random_symplectic(recipe.modes, rng);
        Eigen::MatrixXd omega = symplectic_form(recipe.modes).matrix();
        ASSERT_TRUE((u * omega * u.transpose() - omega).isZero(1e-10));
        GaussianState t = validate_state(u * s.cov() * u.transpose(), s.mean());
        std::vector<double> a = williamson_spectrum(s).values;
        std::vector<double> b = williamson_spectrum(t).values;
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_NEAR(a[i], b[i], 1e-8) << "trial " << trial;
        }
    }
}

TEST(IsPure, Examples) {
    std::vector<double> zero{0.0};
    std::vector<double> one{1.0};
    EXPECT_TRUE(is_pure(thermal(zero)));
    EXPECT_FALSE(is_pure(thermal(one)));
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        DisplacedSqueezedParams p{{uniform(rng, -2, 2), uniform(rng, -2, 2)}, std::polar(uniform(rng, 0, 1.5), uniform(rng, 0, 6.3))};
        EXPECT_TRUE(is_pure(displaced_squeezed(p)));
    }
}

TEST(IsIncoherent, ThermalProduct) {
    std::vector<double> n{0.5, 2.0};
    auto result = is_incoherent_state(thermal(n));
    ASSERT_TRUE(result.has_value());
    EXPECT_NEAR((*result)[0], 0.5, 1e-12);
    EXPECT_NEAR((*result)[1], 2.0, 1e-12);
}

TEST(IsIncoherent, CoherentStateIsNot) {
    EXPECT_FALSE(is_incoherent_state(displaced_squeezed({{1.0, 0.0}, {0.0, 0.0}})).has_value());
}

TEST(IsIncoherent, AnisotropicBlockIsNot) {
    GaussianState s = validate_state(Eigen::Vector2d(2.0, 3.0).asDiagonal().toDenseMatrix(), Eigen::VectorXd::Zero(2));
    EXPECT_FALSE(is_incoherent_state(s).has_value());
}

TEST(IsIncoherent, CorrelatedIsNot) {
    EXPECT_FALSE(is_incoherent_state(two_mode_standard_form({2.0, 2.0, 0.5, 0.5})).has_value());
}

TEST(IsIncoherent, OnlyVacuumIsPure) {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        std::size_t m = 1 + uniform_index(rng, 3);
        GaussianState s = testing::random_thermal_product(m, 2.0, rng);
        ASSERT_TRUE(is_incoherent_state(s).has_value());
        EXPECT_FALSE(is_pure(s));
    }
    std::vector<double> zeros{0.0, 0.0};
    EXPECT_TRUE(is_pure(thermal(zeros)));
}

TEST(TensorProduct, BlockDiagonal) {
    std::vector<double> n{1.0};
    GaussianState a = thermal(n);
    GaussianState b = displaced_squeezed({{0.5, -1.0}, {0.3, 0.0}});
    GaussianState ab = tensor_product(a, b);
    EXPECT_EQ(ab.modes(), 2u);
    EXPECT_EQ(ab.mode_cov(0), a.mode_cov(0));
    EXPECT_EQ(ab.mode_cov(1), b.mode_cov(0));
    EXPECT_TRUE(ab.block(0, 1).isZero());
    EXPECT_EQ(ab.mode_mean(1), b.mode_mean(0));
}

}  // namespace
}  // namespace gcoh
