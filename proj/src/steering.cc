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

#include "cvsteer/steering.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace cvsteer {

namespace {

constexpr double kSingularRcond = 1e-13;

void check_steering_args(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set) {
    std::size_t n = state.num_modes();
    if (steered >= n) {
        throw std::out_of_range(fmt::format("steered mode {} out of range for {} modes", steered, n));
    }
    if (steering_set.empty()) {
        throw std::invalid_argument("steering set is empty");
    }
    for (std::size_t i = 0; i < steering_set.size(); ++i) {
        std::size_t k = steering_set[i];
        if (k >= n) {
            throw std::out_of_range(fmt::format("steering mode {} out of range for {} modes", k, n));
        }
        if (k == steered) {
            throw std::invalid_argument(fmt::format("steered mode {} is also in the steering set", k));
        }
        if (std::find(steering_set.begin(), steering_set.begin() + static_cast<std::ptrdiff_t>(i), k) !=
            steering_set.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw std::invalid_argument(fmt::format("steering set lists mode {} twice", k));
        }
    }
}

}  // namespace

Inference infer(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set,
                Quadrature axis) {
    check_steering_args(state, steered, steering_set);
    const auto &cov = state.cov();
    auto k = static_cast<Eigen::Index>(steering_set.size());
    auto target = static_cast<Eigen::Index>(quadrature_index(steered, axis));

    Eigen::MatrixXd block(k, k);
    Eigen::VectorXd cross(k);
    for (Eigen::Index a = 0; a < k; ++a) {
        auto ia = static_cast<Eigen::Index>(quadrature_index(steering_set[static_cast<std::size_t>(a)], axis));
        cross(a) = cov(ia, target);
        for (Eigen::Index b = 0; b < k; ++b) {
            block(a, b) = cov(ia, static_cast<Eigen::Index>(
                                      quadrature_index(steering_set[static_cast<std::size_t>(b)], axis)));
        }
    }

    Inference out;
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() == Eigen::Success && llt.rcond() > kSingularRcond) {
        out.gains = -llt.solve(cross);
    } else {
        out.gains = -block.completeOrthogonalDecomposition().solve(cross);
        out.singular = true;
    }
    // Var(q_j) + 2 g.c + g^T C g, which at the optimum equals Var(q_j) - c^T C^-1 c.
    double value = cov(target, target) + out.gains.dot(cross);
    out.variance = std::max(0.0, value);
    return out;
}

GainVector optimal_gains(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set) {
    Inference x = infer(state, steered, steering_set, Quadrature::X);
    Inference p = infer(state, steered, steering_set, Quadrature::P);
    GainVector g;
    g.steered_mode = steered;
    g.steering_set.assign(steering_set.begin(), steering_set.end());
    g.gains_x = std::move(x.gains);
    g.gains_p = std::move(p.gains);
    g.singular = x.singular || p.singular;
    return g;
}

double inferred_variance(const GaussianState &state, std::size_t steered, std::span<const std::size_t> steering_set,
                         Quadrature axis) {
    return infer(state, steered, steering_set, axis).variance;
}

LinearForm inference_form(std::size_t n_modes, std::size_t steered, std::span<const std::size_t> steering_set,
                          const Eigen::VectorXd &gains, Quadrature axis) {
    if (static_cast<std::size_t>(gains.size()) != steering_set.size()) {
        throw std::invalid_argument("gain vector length does not match steering set");
    }
    LinearForm form(n_modes);
    form.add(steered, axis, 1.0);
    for (std::size_t i = 0; i < steering_set.size(); ++i) {
        form.add(steering_set[i], axis, gains(static_cast<Eigen::Index>(i)));
    }
    return form;
}

SteeringProduct steering_product(const GaussianState &state, std::size_t steered,
                                 std::span<const std::size_t> steering_set) {
    Inference x = infer(state, steered, steering_set, Quadrature::X);
    Inference p = infer(state, steered, steering_set, Quadrature::P);
    SteeringProduct s;
    s.inferred_var_x = x.variance;
    s.inferred_var_p = p.variance;
    s.steering_number = x.variance * p.variance;
    s.product = std::sqrt(s.steering_number);
    s.steerable = s.product < kSteeringThreshold - kSteeringDecisionMargin;
    s.singular = x.singular || p.singular;
    return s;
}

double SteeringReport::max_steering_number() const {
    double m = 0.0;
    for (const auto &e : entries) {
        m = std::max(m, e.value.steering_number);
    }
    return m;
}

double SteeringReport::mean_steering_number() const {
    if (entries.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto &e : entries) {
        sum += e.value.steering_number;
    }
    return sum / static_cast<double>(entries.size());
}

SteeringReport collective_steering_report(const GaussianState &state, std::span<const std::size_t> active_modes) {
    if (active_modes.size() < 2) {
        throw std::invalid_argument(
            fmt::format("steering report needs at least two active modes, got {}", active_modes.size()));
    }
    SteeringReport report;
    report.entries.reserve(active_modes.size());
    for (std::size_t j : active_modes) {
        ModeSteering entry;
        entry.mode = j;
        for (std::size_t k : active_modes) {
            if (k != j) {
                entry.steering_set.push_back(k);
            }
        }
        entry.value = steering_product(state, j, entry.steering_set);
        report.entries.push_back(std::move(entry));
    }
    report.regime_count = classify_regime(report);
    report.full_inseparability = report.regime_count == static_cast<int>(report.entries.size());
    return report;
}

int classify_regime(const SteeringReport &report) {
    return static_cast<int>(std::count_if(report.entries.begin(), report.entries.end(),
                                          [](const ModeSteering &e) { return e.value.steerable; }));
}

MonogamyResult monogamy_check(const GaussianState &state, std::size_t a, std::span<const std::size_t> b,
                              std::span<const std::size_t> c) {
    for (std::size_t k : b) {
        if (std::find(c.begin(), c.end(), k) != c.end()) {
            throw std::invalid_argument(fmt::format("steering sets overlap at mode {}", k));
        }
    }
    MonogamyResult r;
    r.s_a_b = steering_product(state, a, b).product;
    r.s_a_c = steering_product(state, a, c).product;
    r.product = r.s_a_b * r.s_a_c;
    r.holds = r.product >= 1.0 - kMonogamyTolerance;
    return r;
}

TripartiteVerdict tripartite_criteria(const GaussianState &state, const std::array<std::size_t, 3> &modes) {
    for (std::size_t m : modes) {
        if (m >= state.num_modes()) {
            throw std::out_of_range(fmt::format("tripartite mode {} out of range", m));
        }
    }
    if (modes[0] == modes[1] || modes[0] == modes[2] || modes[1] == modes[2]) {
        throw std::invalid_argument(fmt::format("tripartite criteria need distinct modes, got {}", modes));
    }
    const double w = 1.0 / std::sqrt(2.0);
    LinearForm u(state.num_modes());
    u.add(modes[0], Quadrature::X, 1.0).add(modes[1], Quadrature::X, -w).add(modes[2], Quadrature::X, -w);
    LinearForm v(state.num_modes());
    v.add(modes[0], Quadrature::P, 1.0).add(modes[1], Quadrature::P, w).add(modes[2], Quadrature::P, w);

    TripartiteVerdict t;
    t.var_u = variance_of(state, u);
    t.var_v = variance_of(state, v);
    t.product_of_variances = t.var_u * t.var_v;
    t.genuine_entanglement = t.product_of_variances < kGenuineEntanglementThreshold;
    t.genuine_steering = t.product_of_variances < kGenuineSteeringThreshold;
    return t;
}

}  // namespace cvsteer
