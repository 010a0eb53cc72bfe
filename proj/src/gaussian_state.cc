#include "gcoh/gaussian_state.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace gcoh {

namespace {

constexpr double kPairingTol = 1e-8;

std::string describe(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

}  // namespace

double scaled_tol(double tol, const Eigen::MatrixXd &m) {
    return tol * std::max(1.0, m.norm());
}

Eigen::Matrix2d rotation(double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, s, -s, c;
    return r;
}

SymplecticForm::SymplecticForm(std::size_t modes) : modes_(modes) {
    if (modes == 0) {
        throw Error(ErrorKind::invalid_argument, "symplectic form needs at least one mode");
    }
    auto n = static_cast<Eigen::Index>(2 * modes);
    matrix_ = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2) {
        matrix_(k, k + 1) = 1.0;
        matrix_(k + 1, k) = -1.0;
    }
}

SymplecticForm symplectic_form(std::size_t modes) {
    return SymplecticForm(modes);
}

Eigen::Matrix2d GaussianState::block(std::size_t i, std::size_t j) const {
    if (i >= modes() || j >= modes()) {
        throw Error(ErrorKind::shape_error, "mode index out of range");
    }
    return cov_.block<2, 2>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j));
}

Eigen::Vector2d GaussianState::mode_mean(std::size_t i) const {
    if (i >= modes()) {
        throw Error(ErrorKind::shape_error, "mode index out of range");
    }
    return mean_.segment<2>(static_cast<Eigen::Index>(2 * i));
}

SymplecticSpectrum symplectic_eigenvalues(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        throw Error(ErrorKind::shape_error, "symplectic spectrum needs a square matrix of even size");
    }
    auto modes = static_cast<std::size_t>(m.rows() / 2);
    Eigen::MatrixXd omega_m = symplectic_form(modes).matrix() * m;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(omega_m, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::numeric_error, "eigenvalue iteration did not converge");
    }
    const double tol = kPairingTol * std::max(1.0, m.norm());

    std::vector<double> upper;
    std::vector<double> lower;
    for (const std::complex<double> &z : solver.eigenvalues()) {
        if (std::abs(z.real()) > tol) {
            throw Error(ErrorKind::numeric_error,
                        "eigenvalue of Omega*V has real part " + describe(z.real()) + "; spectrum is not +-i*v paired");
        }
        (z.imag() >= 0 ? upper : lower).push_back(std::abs(z.imag()));
    }
    if (upper.size() != lower.size()) {
        throw Error(ErrorKind::numeric_error, "eigenvalues of Omega*V are not +-i*v paired");
    }
    std::sort(upper.begin(), upper.end());
    std::sort(lower.begin(), lower.end());

    SymplecticSpectrum spectrum;
    spectrum.values.reserve(modes);
    for (std::size_t k = 0; k < upper.size(); ++k) {
        if (std::abs(upper[k] - lower[k]) > tol) {
            throw Error(ErrorKind::numeric_error, "eigenvalue pair mismatch " + describe(upper[k]) + " vs " +
                                                      describe(lower[k]));
        }
        spectrum.values.push_back(0.5 * (upper[k] + lower[k]));
    }
    return spectrum;
}

GaussianState validate_state(const Eigen::MatrixXd &cov, const Eigen::VectorXd &mean, double tol) {
    if (cov.rows() == 0 || cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
        throw Error(ErrorKind::shape_error, "covariance must be a non-empty 2m x 2m matrix");
    }
    if (mean.size() != cov.rows()) {
        throw Error(ErrorKind::shape_error, "mean has length " + std::to_string(mean.size()) + ", expected " +
                                                std::to_string(cov.rows()));
    }
    if (!cov.allFinite() || !mean.allFinite()) {
        throw Error(ErrorKind::invalid_argument, "state contains non-finite entries");
    }
    const double abs_tol = scaled_tol(tol, cov);
    double asymmetry = (cov - cov.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > abs_tol) {
        throw Error(ErrorKind::not_symmetric, "covariance asymmetry " + describe(asymmetry) + " exceeds tolerance");
    }
    Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    if (llt.info() != Eigen::Success) {
        double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
        throw Error(ErrorKind::uncertainty_violation,
                    "covariance is not positive definite (min eigenvalue " + describe(min_eig) + ")");
    }
    SymplecticSpectrum spectrum = symplectic_eigenvalues(sym);
    double v_min = spectrum.values.front();
    if (v_min < 1.0 - abs_tol) {
        throw Error(ErrorKind::uncertainty_violation, "symplectic eigenvalue v = " + describe(v_min) + " < 1");
    }
    return GaussianState(std::move(sym), mean);
}

SymplecticSpectrum williamson_spectrum(const GaussianState &state) {
    return symplectic_eigenvalues(state.cov());
}

bool is_pure(const GaussianState &state, double tol) {
    return std::abs(state.cov().determinant() - 1.0) <= scaled_tol(tol, state.cov());
}

std::optional<std::vector<double>> is_incoherent_state(const GaussianState &state, double tol) {
    const double abs_tol = scaled_tol(tol, state.cov());
    if (state.mean().norm() > abs_tol) {
        return std::nullopt;
    }
    const std::size_t m = state.modes();
    std::vector<double> n_bar;
    n_bar.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (state.block(i, j).norm() > abs_tol) {
                return std::nullopt;
            }
        }
        Eigen::Matrix2d local = state.mode_cov(i);
        double lambda = 0.5 * local.trace();
        if ((local - lambda * Eigen::Matrix2d::Identity()).norm() > abs_tol) {
            return std::nullopt;
        }
        n_bar.push_back(std::max(0.0, 0.5 * (lambda - 1.0)));
    }
    return n_bar;
}

GaussianState tensor_product(const GaussianState &a, const GaussianState &b) {
    const Eigen::Index na = a.cov().rows();
    const Eigen::Index nb = b.cov().rows();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    Eigen::VectorXd mean(na + nb);
    mean << a.mean(), b.mean();
    return validate_state(cov, mean);
}

}  // namespace gcoh
