// Copyright 2026 The cvsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvsteer/gaussian.h"

#include <cmath>

#include <fmt/format.h>

namespace cvsteer {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kUncertaintyTolerance = 1e-9;

void check_mode(const GaussianState &state, std::size_t mode, const char *what) {
    if (mode >= state.num_modes()) {
        throw std::out_of_range(
            fmt::format("{}: mode index {} out of range for a {}-mode state", what, mode, state.num_modes()));
    }
}

// Applies the 2x2 map [[a, b], [c, d]] on quadrature rows/columns (r, s) of a
// symmetric matrix by congruence.
void rotate_pair(Eigen::MatrixXd &m, Eigen::Index r, Eigen::Index s, double a, double b, double c, double d) {
    Eigen::RowVectorXd row_r = m.row(r);
    Eigen::RowVectorXd row_s = m.row(s);
    m.row(r) = a * row_r + b * row_s;
    m.row(s) = c * row_r + d * row_s;
    Eigen::VectorXd col_r = m.col(r);
    Eigen::VectorXd col_s = m.col(s);
    m.col(r) = a * col_r + b * col_s;
    m.col(s) = c * col_r + d * col_s;
}

void symmetrize(Eigen::MatrixXd &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = r + 1; c < m.cols(); ++c) {
            m(c, r) = m(r, c);
        }
    }
}

}  // namespace

const char *quadrature_name(Quadrature q) { return q == Quadrature::X ? "x" : "p"; }

Quadrature parse_quadrature(const std::string &text) {
    if (text == "x" || text == "X") {
        return Quadrature::X;
    }
    if (text == "p" || text == "P") {
        return Quadrature::P;
    }
    throw std::invalid_argument(fmt::format("unknown quadrature '{}', expected x or p", text));
}

GaussianState::GaussianState(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
    if (cov_.rows() == 0 || cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0) {
        throw std::invalid_argument(
            fmt::format("covariance must be a non-empty square matrix of even size, got {}x{}", cov_.rows(),
                        cov_.cols()));
    }
    if (!cov_.allFinite()) {
        throw std::invalid_argument("covariance has non-finite entries");
    }
    double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
        throw std::invalid_argument("covariance is not symmetric");
    }
    symmetrize(cov_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kSymmetryTolerance * scale) {
        throw UnphysicalStateError(
            fmt::format("covariance is not positive semidefinite (min eigenvalue {})", eig.eigenvalues().minCoeff()));
    }
    for (std::size_t m = 0; m < num_modes(); ++m) {
        double det = mode_determinant(m);
        if (det < 1.0 - kUncertaintyTolerance) {
            throw UnphysicalStateError(
                fmt::format("mode {} violates the uncertainty bound: Var(x)Var(p) - Cov^2 = {} < 1", m + 1, det));
        }
    }
}

GaussianState GaussianState::vacuum(std::size_t n_modes) {
    if (n_modes == 0) {
        throw std::invalid_argument("vacuum state needs at least one mode");
    }
    auto dim = static_cast<Eigen::Index>(2 * n_modes);
    return GaussianState(Eigen::MatrixXd::Identity(dim, dim), Trusted{});
}

GaussianState GaussianState::squeezed(double var_sq_dB, double var_anti_dB, Quadrature squeezed_axis) {
    if (!std::isfinite(var_sq_dB) || !std::isfinite(var_anti_dB)) {
        throw std::invalid_argument("squeezing levels must be finite");
    }
    double v_sq = std::pow(10.0, var_sq_dB / 10.0);
    double v_anti = std::pow(10.0, var_anti_dB / 10.0);
    if (v_sq * v_anti < 1.0 - kUncertaintyTolerance) {
        throw UnphysicalStateError(fmt::format(
            "squeezed mode ({} dB, {} dB) has variance product {} < 1", var_sq_dB, var_anti_dB, v_sq * v_anti));
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    auto s = static_cast<Eigen::Index>(squeezed_axis);
    cov(s, s) = v_sq;
    cov(1 - s, 1 - s) = v_anti;
    return GaussianState(std::move(cov), Trusted{});
}

double GaussianState::variance(std::size_t mode, Quadrature q) const {
    check_mode(*this, mode, "variance");
    auto k = static_cast<Eigen::Index>(quadrature_index(mode, q));
    return cov_(k, k);
}

double GaussianState::covariance(std::size_t mode_a, Quadrature qa, std::size_t mode_b, Quadrature qb) const {
    check_mode(*this, mode_a, "covariance");
    check_mode(*this, mode_b, "covariance");
    return cov_(static_cast<Eigen::Index>(quadrature_index(mode_a, qa)),
                static_cast<Eigen::Index>(quadrature_index(mode_b, qb)));
}

double GaussianState::mode_determinant(std::size_t mode) const {
    check_mode(*this, mode, "mode_determinant");
    auto k = static_cast<Eigen::Index>(2 * mode);
    return cov_(k, k) * cov_(k + 1, k + 1) - cov_(k, k + 1) * cov_(k + 1, k);
}

GaussianState GaussianState::marginal(const std::vector<std::size_t> &modes) const {
    if (modes.empty()) {
        throw std::invalid_argument("marginal needs at least one mode");
    }
    auto dim = static_cast<Eigen::Index>(2 * modes.size());
    Eigen::MatrixXd sub(dim, dim);
    for (std::size_t a = 0; a < modes.size(); ++a) {
        check_mode(*this, modes[a], "marginal");
        for (std::size_t b = 0; b < modes.size(); ++b) {
            sub.block<2, 2>(static_cast<Eigen::Index>(2 * a), static_cast<Eigen::Index>(2 * b)) =
                cov_.block<2, 2>(static_cast<Eigen::Index>(2 * modes[a]), static_cast<Eigen::Index>(2 * modes[b]));
        }
    }
    return GaussianState(std::move(sub), Trusted{});
}

GaussianState tensor(const GaussianState &a, const GaussianState &b) {
    auto na = a.cov_.rows();
    auto nb = b.cov_.rows();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov_;
    cov.bottomRightCorner(nb, nb) = b.cov_;
    return GaussianState(std::move(cov), GaussianState::Trusted{});
}

GaussianState apply_beamsplitter(const GaussianState &state, std::size_t i, std::size_t j, double reflectivity) {
    check_mode(state, i, "apply_beamsplitter");
    check_mode(state, j, "apply_beamsplitter");
    if (i == j) {
        throw std::invalid_argument("apply_beamsplitter needs two distinct modes");
    }
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
        throw std::invalid_argument(fmt::format("reflectivity {} outside [0, 1]", reflectivity));
    }
    double t = std::sqrt(1.0 - reflectivity);
    double r = std::sqrt(reflectivity);
    Eigen::MatrixXd cov = state.cov_;
    for (auto q : {Quadrature::X, Quadrature::P}) {
        rotate_pair(cov, static_cast<Eigen::Index>(quadrature_index(i, q)),
                    static_cast<Eigen::Index>(quadrature_index(j, q)), t, r, -r, t);
    }
    symmetrize(cov);
    return GaussianState(std::move(cov), GaussianState::Trusted{});
}

GaussianState apply_loss(const GaussianState &state, std::size_t i, double transmission) {
    check_mode(state, i, "apply_loss");
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw std::invalid_argument(fmt::format("transmission {} outside [0, 1]", transmission));
    }
    double amplitude = std::sqrt(transmission);
    Eigen::MatrixXd cov = state.cov_;
    for (auto q : {Quadrature::X, Quadrature::P}) {
        auto k = static_cast<Eigen::Index>(quadrature_index(i, q));
        cov.row(k) *= amplitude;
        cov.col(k) *= amplitude;
    }
    for (auto q : {Quadrature::X, Quadrature::P}) {
        auto k = static_cast<Eigen::Index>(quadrature_index(i, q));
        cov(k, k) += 1.0 - transmission;
    }
    if (transmission == 0.0) {
        auto k = static_cast<Eigen::Index>(2 * i);
        cov.block(k, 0, 2, cov.cols()).setZero();
        cov.block(0, k, cov.rows(), 2).setZero();
        cov.block<2, 2>(k, k).setIdentity();
    }
    symmetrize(cov);
    return GaussianState(std::move(cov), GaussianState::Trusted{});
}

GaussianState swap_modes(const GaussianState &state, std::size_t i, std::size_t j) {
    check_mode(state, i, "swap_modes");
    check_mode(state, j, "swap_modes");
    Eigen::MatrixXd cov = state.cov_;
    if (i != j) {
        auto a = static_cast<Eigen::Index>(2 * i);
        auto b = static_cast<Eigen::Index>(2 * j);
        for (Eigen::Index q = 0; q < 2; ++q) {
            cov.row(a + q).swap(cov.row(b + q));
        }
        for (Eigen::Index q = 0; q < 2; ++q) {
            cov.col(a + q).swap(cov.col(b + q));
        }
    }
    return GaussianState(std::move(cov), GaussianState::Trusted{});
}

double variance_of(const GaussianState &state, const LinearForm &form) {
    if (form.size() != 2 * state.num_modes()) {
        throw std::invalid_argument(fmt::format("linear form has {} coefficients, state has {} quadratures",
                                                form.size(), 2 * state.num_modes()));
    }
    const auto &c = form.coefficients();
    if (c.isZero(0.0)) {
        throw std::invalid_argument("linear form has no nonzero coefficient");
    }
    return c.dot(state.cov() * c);
}

}  // namespace cvsteer
