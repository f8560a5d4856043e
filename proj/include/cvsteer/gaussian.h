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

#ifndef CVSTEER_GAUSSIAN_H
#define CVSTEER_GAUSSIAN_H

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cvsteer {

/// Canonical quadratures of a qumode. The numeric value is the offset of the
/// quadrature inside its mode's 2x2 block.
enum class Quadrature : std::size_t { X = 0, P = 1 };

inline Quadrature conjugate(Quadrature q) { return q == Quadrature::X ? Quadrature::P : Quadrature::X; }
const char *quadrature_name(Quadrature q);
Quadrature parse_quadrature(const std::string &text);

/// Row/column of a quadrature in the mode-major ordering (x_1, p_1, x_2, p_2, ...).
inline std::size_t quadrature_index(std::size_t mode, Quadrature q) {
    return 2 * mode + static_cast<std::size_t>(q);
}

/// Raised when a covariance matrix (or a constructor request) violates the
/// uncertainty bound or positivity.
struct UnphysicalStateError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Zero-mean multimode Gaussian state in shot-noise units (vacuum covariance
/// is the identity). Modes are 0-indexed.
///
/// The public constructor validates symmetry, positive semidefiniteness and
/// the per-mode bound Var(x)Var(p) - Cov(x,p)^2 >= 1. States derived through
/// the transforms below are physical by construction and skip revalidation.
class GaussianState {
   public:
    explicit GaussianState(Eigen::MatrixXd cov);

    static GaussianState vacuum(std::size_t n_modes);

    /// Single-mode diagonal state; the squeezed_axis variance is 10^(var_sq_dB/10)
    /// and the conjugate variance 10^(var_anti_dB/10).
    static GaussianState squeezed(double var_sq_dB, double var_anti_dB, Quadrature squeezed_axis);

    std::size_t num_modes() const { return static_cast<std::size_t>(cov_.rows()) / 2; }
    const Eigen::MatrixXd &cov() const { return cov_; }

    double variance(std::size_t mode, Quadrature q) const;
    double covariance(std::size_t mode_a, Quadrature qa, std::size_t mode_b, Quadrature qb) const;

    /// Var(x)Var(p) - Cov(x,p)^2 of one mode's 2x2 block.
    double mode_determinant(std::size_t mode) const;

    /// Sub-state on the listed modes, in the listed order.
    GaussianState marginal(const std::vector<std::size_t> &modes) const;

    bool operator==(const GaussianState &other) const { return cov_ == other.cov_; }

   private:
    struct Trusted {};
    GaussianState(Eigen::MatrixXd cov, Trusted) : cov_(std::move(cov)) {}

    friend GaussianState tensor(const GaussianState &a, const GaussianState &b);
    friend GaussianState apply_beamsplitter(const GaussianState &state, std::size_t i, std::size_t j,
                                            double reflectivity);
    friend GaussianState apply_loss(const GaussianState &state, std::size_t i, double transmission);
    friend GaussianState swap_modes(const GaussianState &state, std::size_t i, std::size_t j);

    Eigen::MatrixXd cov_;
};

GaussianState tensor(const GaussianState &a, const GaussianState &b);

/// Two-mode beam splitter with reflectivity R = 1 - eta:
///   q_i' =  sqrt(eta) q_i + sqrt(1-eta) q_j
///   q_j' = -sqrt(1-eta) q_i + sqrt(eta) q_j      (q = x and p alike)
GaussianState apply_beamsplitter(const GaussianState &state, std::size_t i, std::size_t j, double reflectivity);

/// Couples mode i to a fresh vacuum through a beam splitter of the given
/// transmission and traces the vacuum port out: V -> T V + (1 - T).
GaussianState apply_loss(const GaussianState &state, std::size_t i, double transmission);

/// Relabels modes i and j.
GaussianState swap_modes(const GaussianState &state, std::size_t i, std::size_t j);

/// Real linear combination of the quadratures of a state.
class LinearForm {
   public:
    explicit LinearForm(std::size_t n_modes) : coefficients_(Eigen::VectorXd::Zero(2 * n_modes)) {}
    explicit LinearForm(Eigen::VectorXd coefficients) : coefficients_(std::move(coefficients)) {}

    LinearForm &add(std::size_t mode, Quadrature q, double coefficient) {
        coefficients_(quadrature_index(mode, q)) += coefficient;
        return *this;
    }

    std::size_t size() const { return static_cast<std::size_t>(coefficients_.size()); }
    const Eigen::VectorXd &coefficients() const { return coefficients_; }

    LinearForm scaled(double c) const { return LinearForm(Eigen::VectorXd(c * coefficients_)); }

   private:
    Eigen::VectorXd coefficients_;
};

/// form^T cov form.
double variance_of(const GaussianState &state, const LinearForm &form);

}  // namespace cvsteer

#endif
