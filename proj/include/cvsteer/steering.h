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

#ifndef CVSTEER_STEERING_H
#define CVSTEER_STEERING_H

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvsteer/gaussian.h"

namespace cvsteer {

/// Squared-convention thresholds. Steering of mode j: (S_{j|K})^2 < 1.
/// Genuine tripartite steering: Var(u) Var(v) < 0.25 (0.5 in standard deviations).
inline constexpr double kSteeringThreshold = 1.0;
/// A mode counts as steerable when S < kSteeringThreshold - kSteeringDecisionMargin;
/// the margin absorbs rounding so vacuum (S = 1 up to ~1e-16) is never steerable.
inline constexpr double kSteeringDecisionMargin = 1e-12;
inline constexpr double kGenuineEntanglementThreshold = 1.0;
inline constexpr double kGenuineSteeringThreshold = 0.25;
inline constexpr double kMonogamyTolerance = 1e-9;

/// Optimal same-axis inference of q_j from the quadratures q_k, k in K.
struct Inference {
    /// Minimum of Var(q_j + sum_k g_k q_k); the Schur complement of the
    /// steering set's covariance block.
    double variance = 0.0;
    /// g_k in the order of the steering set.
    Eigen::VectorXd gains;
    /// Steering-set block was singular; gains are the least-norm solution.
    bool singular = false;
};

Inference infer(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set,
                Quadrature axis);

/// Gains g_{k,x} and g_{k,p} for inferring mode j from K.
struct GainVector {
    std::size_t steered_mode = 0;
    std::vector<std::size_t> steering_set;
    Eigen::VectorXd gains_x;
    Eigen::VectorXd gains_p;
    bool singular = false;
};

GainVector optimal_gains(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set);

/// Convenience wrapper returning Inference::variance.
double inferred_variance(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set,
                         Quadrature axis);

/// Assembles q_j + sum_k g_k q_k for one axis as an explicit linear form.
LinearForm inference_form(std::size_t n_modes, std::size_t steered, std::span<const std::size_t> steering_set,
                          const Eigen::VectorXd &gains, Quadrature axis);

/// S_{j|K} = Delta_inf(x_j) Delta_inf(p_j) (standard deviations) and the
/// steering number S^2.
struct SteeringProduct {
    double inferred_var_x = 0.0;
    double inferred_var_p = 0.0;
    double product = 0.0;
    double steering_number = 0.0;
    bool steerable = false;
    bool singular = false;
};

SteeringProduct steering_product(const GaussianState &state, std::size_t steered,
                                 std::span<const std::size_t> steering_set);

struct ModeSteering {
    std::size_t mode = 0;
    std::vector<std::size_t> steering_set;
    SteeringProduct value;
};

struct SteeringReport {
    std::vector<ModeSteering> entries;
    /// Every active mode is steered by the rest.
    bool full_inseparability = false;
    /// Number of steerable modes, 0..N.
    int regime_count = 0;

    std::size_t num_active() const { return entries.size(); }
    double max_steering_number() const;
    double mean_steering_number() const;
};

/// Steering of each active mode by all remaining active modes.
SteeringReport collective_steering_report(const GaussianState &state, std::span<const std::size_t> active_modes);

/// Count of steerable entries.
int classify_regime(const SteeringReport &report);

struct MonogamyResult {
    double s_a_b = 0.0;
    double s_a_c = 0.0;
    double product = 0.0;
    bool holds = false;
};

/// S_{A|B} S_{A|C} for disjoint steering sets B and C not containing A.
MonogamyResult monogamy_check(const GaussianState &state, std::size_t a, std::span<const std::size_t> b,
                              std::span<const std::size_t> c);

struct TripartiteVerdict {
    double var_u = 0.0;
    double var_v = 0.0;
    /// Var(x_1 - (x_2 + x_3)/sqrt2) * Var(p_1 + (p_2 + p_3)/sqrt2).
    double product_of_variances = 0.0;
    bool genuine_entanglement = false;
    bool genuine_steering = false;
};

/// modes[0] plays the role of mode 1 in the combinations.
TripartiteVerdict tripartite_criteria(const GaussianState &state, const std::array<std::size_t, 3> &modes);

}  // namespace cvsteer

#endif
