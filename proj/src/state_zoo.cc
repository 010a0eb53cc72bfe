#include "gcoh/state_zoo.h"

#include <cmath>
#include <numbers>

namespace gcoh {

namespace {

// Wraps to (-pi, pi].
double wrap_angle(double x) {
    double y = std::remainder(x, 2.0 * std::numbers::pi);
    return y <= -std::numbers::pi ? y + 2.0 * std::numbers::pi : y;
}

struct SpectrumPair {
    double plus;
    double minus;
};

// Delta^2 - 4 det V expanded as (a^2 - b^2)^2 + 4 (a c + b d)(a d + b c), which
// avoids the cancellation in the unexpanded difference when a = b.
SpectrumPair standard_pair(double a, double b, double c, double d, double tol) {
    double delta = a * a + b * b + 2.0 * c * d;
    double det = (a * b - c * c) * (a * b - d * d);
    double diff = a * a - b * b;
    double disc = diff * diff + 4.0 * (a * c + b * d) * (a * d + b * c);
    if (disc < -tol * std::max(1.0, delta * delta)) {
        throw Error(ErrorKind::numeric_error, "negative discriminant in standard-form spectrum");
    }
    double root = std::sqrt(std::max(0.0, disc));
    double plus_sq = 0.5 * (delta + root);
    if (plus_sq <= 0.0 || det < 0.0) {
        throw Error(ErrorKind::numeric_error, "standard-form parameters do not describe a positive matrix");
    }
    // v+^2 v-^2 = det V
    return {std::sqrt(plus_sq), std::sqrt(det / plus_sq)};
}

}  // namespace

GaussianState thermal(std::span<const double> n_bars) {
    if (n_bars.empty()) {
        throw Error(ErrorKind::invalid_argument, "thermal state needs at least one mode");
    }
    auto n = static_cast<Eigen::Index>(2 * n_bars.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n_bars.size(); ++i) {
        if (!(n_bars[i] >= 0.0) || !std::isfinite(n_bars[i])) {
            throw Error(ErrorKind::invalid_argument, "thermal occupation must be finite and non-negative");
        }
        auto k = static_cast<Eigen::Index>(2 * i);
        cov(k, k) = cov(k + 1, k + 1) = 2.0 * n_bars[i] + 1.0;
    }
    return validate_state(cov, Eigen::VectorXd::Zero(n));
}

GaussianState displaced_squeezed(const DisplacedSqueezedParams &params) {
    double r = std::abs(params.beta);
    double theta = std::arg(params.beta);
    double ch = std::cosh(2.0 * r);
    double sh = std::sinh(2.0 * r);
    Eigen::MatrixXd cov(2, 2);
    cov << ch + std::cos(theta) * sh, std::sin(theta) * sh, std::sin(theta) * sh, ch - std::cos(theta) * sh;
    Eigen::VectorXd mean(2);
    mean << 2.0 * params.alpha.real(), 2.0 * params.alpha.imag();
    return validate_state(cov, mean);
}

bool displaced_squeezed_equivalent(const DisplacedSqueezedParams &p, const DisplacedSqueezedParams &q, double tol) {
    double alpha = std::abs(p.alpha);
    double beta = std::abs(p.beta);
    if (std::abs(alpha - std::abs(q.alpha)) > tol || std::abs(beta - std::abs(q.beta)) > tol) {
        return false;
    }
    if (beta <= tol || alpha <= tol) {
        return true;
    }
    double phase = std::arg(q.beta) - std::arg(p.beta) - 2.0 * (std::arg(q.alpha) - std::arg(p.alpha));
    return std::abs(wrap_angle(phase)) <= tol;
}

Eigen::Matrix4d standard_form_matrix(const StandardFormParams &params, bool partial_transpose) {
    double d = partial_transpose ? -params.d_corr : params.d_corr;
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v(0, 0) = v(1, 1) = params.a;
    v(2, 2) = v(3, 3) = params.b;
    v(0, 2) = v(2, 0) = params.c;
    v(1, 3) = v(3, 1) = d;
    return v;
}

GaussianState two_mode_standard_form(const StandardFormParams &params, const Eigen::Vector4d &mean, double tol) {
    return validate_state(standard_form_matrix(params), mean, tol);
}

StandardFormSpectra standard_form_spectra(const StandardFormParams &params, double tol) {
    SpectrumPair direct = standard_pair(params.a, params.b, params.c, params.d_corr, tol);
    SpectrumPair transposed = standard_pair(params.a, params.b, params.c, -params.d_corr, tol);
    return {direct.plus, direct.minus, transposed.plus, transposed.minus};
}

std::pair<GaussianState, GaussianState> equivalence_class_samples(const GaussianState &state, double theta1,
                                                                  double theta2, double tol) {
    if (state.modes() != 2) {
        throw Error(ErrorKind::invalid_argument, "equivalence class samples need a two-mode state");
    }
    const double abs_tol = scaled_tol(tol, state.cov());
    Eigen::Matrix2d v11 = state.mode_cov(0);
    Eigen::Matrix2d v22 = state.mode_cov(1);
    Eigen::Matrix2d c = state.block(0, 1);
    double a = 0.5 * v11.trace();
    double b = 0.5 * v22.trace();
    if ((v11 - a * Eigen::Matrix2d::Identity()).norm() > abs_tol ||
        (v22 - b * Eigen::Matrix2d::Identity()).norm() > abs_tol || std::abs(c(0, 1)) > abs_tol ||
        std::abs(c(1, 0)) > abs_tol) {
        throw Error(ErrorKind::invalid_argument, "state is not in two-mode standard form");
    }
    Eigen::Matrix2d o1 = rotation(theta1);
    Eigen::Matrix2d o2 = rotation(theta2);
    Eigen::Matrix2d corr = o1 * c * o2.transpose();
    Eigen::Vector2d d1 = state.mode_mean(0);
    Eigen::Vector2d d2 = state.mode_mean(1);

    auto assemble = [&](double first, double second, const Eigen::Vector2d &m1, const Eigen::Vector2d &m2) {
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
        v.block<2, 2>(0, 0) = first * Eigen::Matrix2d::Identity();
        v.block<2, 2>(2, 2) = second * Eigen::Matrix2d::Identity();
        v.block<2, 2>(0, 2) = corr;
        v.block<2, 2>(2, 0) = corr.transpose();
        Eigen::VectorXd d(4);
        d << o1 * m1, o2 * m2;
        return validate_state(v, d, tol);
    };
    return {assemble(a, b, d1, d2), assemble(b, a, d2, d1)};
}

}  // namespace gcoh
