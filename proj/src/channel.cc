#include "gcoh/channel.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace gcoh {

namespace {

constexpr double kFaithfulCutoff = 1e-12;
constexpr double kMaxRandomScale = 1.2;
constexpr double kMaxNoiseJitter = 0.5;

std::string describe(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

Eigen::Index at(std::size_t mode) {
    return static_cast<Eigen::Index>(2 * mode);
}

double channel_tol(double tol, const Eigen::MatrixXd &t, const Eigen::MatrixXd &n) {
    return tol * std::max(1.0, n.norm() + t.squaredNorm());
}

}  // namespace

double complete_positivity_margin(const Eigen::MatrixXd &t, const Eigen::MatrixXd &n) {
    const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(t.rows() / 2)).matrix();
    Eigen::MatrixXcd h(n.rows(), n.cols());
    h.real() = n;
    h.imag() = omega - t * omega * t.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::numeric_error, "Hermitian eigenvalue iteration did not converge");
    }
    return solver.eigenvalues()(0);
}

GaussianChannel validate_channel(const Eigen::MatrixXd &t, const Eigen::MatrixXd &n, const Eigen::VectorXd &shift,
                                 double tol) {
    if (t.rows() == 0 || t.rows() != t.cols() || t.rows() % 2 != 0 || n.rows() != t.rows() ||
        n.cols() != t.cols() || shift.size() != t.rows()) {
        throw Error(ErrorKind::shape_error, "channel needs 2m x 2m T and N and a shift of length 2m");
    }
    if (!t.allFinite() || !n.allFinite() || !shift.allFinite()) {
        throw Error(ErrorKind::invalid_argument, "channel contains non-finite entries");
    }
    const double abs_tol = channel_tol(tol, t, n);
    double asymmetry = (n - n.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > abs_tol) {
        throw Error(ErrorKind::not_symmetric, "noise matrix asymmetry " + describe(asymmetry) + " exceeds tolerance");
    }
    Eigen::MatrixXd sym = 0.5 * (n + n.transpose());
    double margin = complete_positivity_margin(t, sym);
    if (margin < -abs_tol) {
        throw Error(ErrorKind::not_completely_positive,
                    "N + i(Omega - T Omega T^t) has min eigenvalue " + describe(margin));
    }
    return GaussianChannel(t, std::move(sym), shift);
}

GaussianState apply_channel(const GaussianChannel &channel, const GaussianState &state, double tol) {
    if (channel.modes() != state.modes()) {
        throw Error(ErrorKind::shape_error, "channel acts on " + std::to_string(channel.modes()) +
                                                " modes, state has " + std::to_string(state.modes()));
    }
    const Eigen::MatrixXd &t = channel.transfer();
    return validate_state(t * state.cov() * t.transpose() + channel.noise(), t * state.mean() + channel.shift(),
                          tol);
}

std::vector<double> igo_noise_bounds(const std::vector<IgoBlock> &blocks) {
    std::vector<double> gain(blocks.size(), 0.0);
    for (const IgoBlock &block : blocks) {
        gain.at(block.target) += block.scale * block.scale * block.orientation_det();
    }
    std::vector<double> bounds(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        bounds[j] = std::abs(1.0 - gain[j]);
    }
    return bounds;
}

IgoClassification classify_incoherent(const GaussianChannel &channel, double tol) {
    const std::size_t m = channel.modes();
    const Eigen::MatrixXd &t = channel.transfer();
    const Eigen::MatrixXd &n = channel.noise();
    const double abs_tol = scaled_tol(tol, n);
    const double zero_tol = scaled_tol(tol, t);

    if (channel.shift().norm() > abs_tol) {
        return NotIncoherent{"nonzero shift"};
    }

    IgoSpec spec;
    spec.blocks.resize(m);
    std::vector<bool> has_block(m, false);
    std::vector<std::size_t> row_use(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        IgoBlock &entry = spec.blocks[j];
        entry.source = j;
        for (std::size_t i = 0; i < m; ++i) {
            Eigen::Matrix2d b = t.block<2, 2>(at(i), at(j));
            if (b.norm() <= zero_tol) {
                continue;
            }
            if (has_block[j]) {
                return NotIncoherent{"column-pair structure"};
            }
            double scale_sq = 0.5 * b.squaredNorm();
            Eigen::Matrix2d gram = b.transpose() * b - scale_sq * Eigen::Matrix2d::Identity();
            if (gram.norm() > tol * std::max(1.0, b.squaredNorm())) {
                return NotIncoherent{"block is not a scaled orthogonal matrix"};
            }
            has_block[j] = true;
            ++row_use[i];
            entry.target = i;
            entry.scale = std::sqrt(scale_sq);
            entry.orientation = b / entry.scale;
        }
    }

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && n.block<2, 2>(at(i), at(j)).norm() > abs_tol) {
                return NotIncoherent{"noise is not block diagonal"};
            }
        }
        Eigen::Matrix2d local = n.block<2, 2>(at(i), at(i));
        double omega = 0.5 * local.trace();
        if ((local - omega * Eigen::Matrix2d::Identity()).norm() > abs_tol) {
            return NotIncoherent{"noise block is not isotropic"};
        }
        spec.noise.push_back(omega);
    }

    // Columns with t_j = 0 have no preferred target; pair them with unused
    // rows when that completes a bijection.
    spec.strict = std::all_of(row_use.begin(), row_use.end(), [](std::size_t uses) { return uses <= 1; });
    std::size_t next_free = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (has_block[j]) {
            continue;
        }
        if (spec.strict) {
            while (row_use[next_free] != 0) {
                ++next_free;
            }
            spec.blocks[j].target = next_free;
            row_use[next_free] = 1;
        } else {
            spec.blocks[j].target = j;
        }
    }

    std::vector<double> bounds = igo_noise_bounds(spec.blocks);
    for (std::size_t j = 0; j < m; ++j) {
        if (spec.noise[j] < bounds[j] - abs_tol) {
            return NotIncoherent{"noise below incoherence bound"};
        }
    }
    if (spec.strict) {
        return StrictlyIncoherent{std::move(spec)};
    }
    return Incoherent{std::move(spec)};
}

const IgoSpec *igo_spec(const IgoClassification &classification) {
    if (const auto *c = std::get_if<Incoherent>(&classification)) {
        return &c->spec;
    }
    if (const auto *c = std::get_if<StrictlyIncoherent>(&classification)) {
        return &c->spec;
    }
    return nullptr;
}

GaussianChannel igo_channel(const IgoSpec &spec, double tol) {
    const std::size_t m = spec.modes();
    if (m == 0 || spec.noise.size() != m) {
        throw Error(ErrorKind::shape_error, "IgoSpec needs one block and one noise weight per mode");
    }
    auto dim = static_cast<Eigen::Index>(2 * m);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd n = Eigen::MatrixXd::Zero(dim, dim);
    for (const IgoBlock &block : spec.blocks) {
        if (block.source >= m || block.target >= m) {
            throw Error(ErrorKind::shape_error, "IGO block mode index out of range");
        }
        t.block<2, 2>(at(block.target), at(block.source)) = block.scale * block.orientation;
    }
    for (std::size_t j = 0; j < m; ++j) {
        n.block<2, 2>(at(j), at(j)) = spec.noise[j] * Eigen::Matrix2d::Identity();
    }
    return validate_channel(t, n, Eigen::VectorXd::Zero(dim), tol);
}

GaussianChannel random_igo(std::size_t modes, bool strict, Rng &rng) {
    if (modes == 0) {
        throw Error(ErrorKind::invalid_argument, "random IGO needs at least one mode");
    }
    std::vector<std::size_t> targets(modes);
    if (strict) {
        std::iota(targets.begin(), targets.end(), std::size_t{0});
        for (std::size_t k = modes - 1; k > 0; --k) {
            std::swap(targets[k], targets[uniform_index(rng, k + 1)]);
        }
    } else {
        // Redraw until some target is hit twice, so the channel is not strict.
        do {
            for (std::size_t &target : targets) {
                target = uniform_index(rng, modes);
            }
            std::vector<std::size_t> sorted = targets;
            std::sort(sorted.begin(), sorted.end());
            if (modes == 1 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                break;
            }
        } while (true);
    }

    IgoSpec spec;
    spec.strict = strict;
    for (std::size_t j = 0; j < modes; ++j) {
        IgoBlock block;
        block.source = j;
        block.target = targets[j];
        block.scale = uniform(rng, 0.0, kMaxRandomScale);
        block.orientation = rotation(uniform(rng, 0.0, 2.0 * std::numbers::pi));
        if (coin(rng, 0.5)) {
            block.orientation.col(1) *= -1.0;
        }
        spec.blocks.push_back(block);
    }
    for (double bound : igo_noise_bounds(spec.blocks)) {
        double jitter = coin(rng, 0.25) ? 0.0 : uniform(rng, 0.0, kMaxNoiseJitter);
        spec.noise.push_back(bound + jitter);
    }
    return igo_channel(spec);
}

GaussianChannel petz_recovery(const GaussianChannel &channel, const GaussianState &reference, double tol) {
    if (channel.modes() != reference.modes()) {
        throw Error(ErrorKind::shape_error, "reference state and channel mode counts differ");
    }
    IgoClassification classification = classify_incoherent(channel, tol);
    if (igo_spec(classification) == nullptr) {
        throw Error(ErrorKind::invalid_argument,
                    "Petz recovery needs an incoherent channel: " + std::get<NotIncoherent>(classification).reason);
    }
    auto ref_occupations = is_incoherent_state(reference, tol);
    if (!ref_occupations) {
        throw Error(ErrorKind::invalid_argument, "Petz reference must be a thermal product state");
    }
    for (double n : *ref_occupations) {
        if (n <= kFaithfulCutoff) {
            throw Error(ErrorKind::invalid_argument, "Petz reference must be faithful (all occupations > 0)");
        }
    }

    GaussianState output = apply_channel(channel, reference, tol);
    auto out_occupations = is_incoherent_state(output, tol);
    if (!out_occupations) {
        throw Error(ErrorKind::numeric_error, "incoherent channel produced a coherent output from a thermal state");
    }
    for (std::size_t i = 0; i < out_occupations->size(); ++i) {
        if ((*out_occupations)[i] <= kFaithfulCutoff) {
            throw Error(ErrorKind::not_faithful, "channel output is the vacuum in mode " + std::to_string(i) +
                                                     " (k = " + describe((*out_occupations)[i]) + ")");
        }
    }

    // (2n + 1)^2 - 1 = 4 n (n + 1)
    auto weight = [](double occupation) { return std::sqrt(4.0 * occupation * (occupation + 1.0)); };
    const std::size_t m = channel.modes();
    Eigen::VectorXd left(2 * m);
    Eigen::VectorXd right(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        left.segment<2>(at(i)).setConstant(weight((*ref_occupations)[i]));
        right.segment<2>(at(i)).setConstant(1.0 / weight((*out_occupations)[i]));
    }
    Eigen::MatrixXd t_psi = left.asDiagonal() * channel.transfer().transpose() * right.asDiagonal();
    Eigen::MatrixXd n_psi = reference.cov() - t_psi * output.cov() * t_psi.transpose();
    n_psi = 0.5 * (n_psi + n_psi.transpose()).eval();

    GaussianChannel recovery = [&] {
        try {
            return validate_channel(t_psi, n_psi, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * m)), tol);
        } catch (const Error &e) {
            throw Error(ErrorKind::numeric_error, std::string("Petz recovery map is not a valid channel: ") + e.what());
        }
    }();
    IgoClassification recovered = classify_incoherent(recovery, tol);
    if (const auto *bad = std::get_if<NotIncoherent>(&recovered)) {
        throw Error(ErrorKind::numeric_error, "Petz recovery map is not incoherent: " + bad->reason);
    }
    return recovery;
}

}  // namespace gcoh
