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

#ifndef CVSTEER_OPTIMIZER_H
#define CVSTEER_OPTIMIZER_H

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cvsteer/network.h"
#include "cvsteer/steering.h"

namespace cvsteer {

enum class ObjectiveKind { MaxSteeringNumber, MeanSteeringNumber, TripartiteValue };

/// "max-steering", "mean-steering", "tripartite".
const char *objective_name(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string &text);

/// Reproduces the odd-N reflectivity bias of the optimised chain networks.
inline constexpr ObjectiveKind kDefaultObjective = ObjectiveKind::MeanSteeringNumber;

/// Scalar to minimise for a built network. The tripartite objective uses
/// (2, 1, 3) as the mode triple when the first three rails are active and the
/// first three active rails otherwise (mode 2 plays the role of mode 1).
double evaluate_objective(const NetworkSpec &spec, ObjectiveKind kind);

/// Optional per-point probes recorded next to the steering report.
struct ProbeConfig {
    /// Steered mode A and disjoint steering sets B, C (0-based rails).
    std::optional<std::size_t> monogamy_a;
    std::vector<std::size_t> monogamy_b;
    std::vector<std::size_t> monogamy_c;
    /// Mode triple for the tripartite combinations; element 0 plays mode 1.
    std::optional<std::array<std::size_t, 3>> tripartite;

    /// A = rail 2, B = {rail 1}, C = {rail 3}; tripartite (2, 1, 3). Empty
    /// unless rails 1..3 are active.
    static ProbeConfig defaults_for(const std::vector<std::size_t> &active_modes);
};

struct SweepPoint {
    double value = 0.0;
    std::vector<std::size_t> active_modes;
    SteeringReport report;
    std::optional<MonogamyResult> monogamy;
    /// S_{A|B u C}.
    std::optional<double> s_a_bc;
    /// S_{b|A} and S_{c|A} for singleton B = {b}, C = {c}.
    std::optional<double> s_b_a;
    std::optional<double> s_c_a;
    std::optional<TripartiteVerdict> tripartite;
};

struct SweepResult {
    /// A splitter name (values are reflectivity fractions) or "loss_fraction".
    std::string parameter_name;
    std::vector<SweepPoint> points;

    std::vector<double> parameter_values() const;
};

inline constexpr const char *kLossParameter = "loss_fraction";

/// Spec with the sweep parameter set to `value` (reflectivity fraction or loss fraction).
NetworkSpec apply_parameter(const NetworkSpec &spec, const std::string &parameter, double value);

/// Evaluates the metric suite at one parameter value.
SweepPoint evaluate_point(const NetworkSpec &spec, const std::string &parameter, double value,
                          const std::optional<ProbeConfig> &probes);

/// Uniform grid of `steps` points over [from, to], evaluated on up to
/// `threads` workers and returned in grid order. Probes default per point to
/// ProbeConfig::defaults_for.
SweepResult sweep(const NetworkSpec &spec, const std::string &parameter, double from, double to, std::size_t steps,
                  const std::optional<ProbeConfig> &probes = std::nullopt, unsigned threads = 1);

struct ReflectivityOptimum {
    std::string parameter;
    double r_star = 0.0;
    double objective_value = 0.0;
    ObjectiveKind objective = kDefaultObjective;
    std::size_t evaluations = 0;
};

inline constexpr std::size_t kCoarseGridPoints = 201;
inline constexpr double kDefaultReflectivityTolerance = 1e-4;

/// Coarse grid over R in [0, 1] followed by golden-section refinement inside
/// the bracket around the best grid point.
ReflectivityOptimum optimize_reflectivity(const NetworkSpec &spec, const std::string &splitter, ObjectiveKind objective,
                                          double tolerance = kDefaultReflectivityTolerance,
                                          std::size_t coarse_points = kCoarseGridPoints);

struct RegimeTransition {
    double loss = 0.0;
    int count_before = 0;
    int count_after = 0;
};

struct RegimeScan {
    SweepResult sweep;
    std::vector<RegimeTransition> transitions;
    /// Distinct regime counts seen along the scan.
    std::vector<int> regimes_visited;
    std::size_t distinct_regime_count() const { return regimes_visited.size(); }
};

inline constexpr double kTransitionTolerance = 1e-5;

/// Asymmetric-loss scan with regime changes located by bisection.
RegimeScan loss_regime_scan(const NetworkSpec &spec, double from, double to, std::size_t steps, unsigned threads = 1);

}  // namespace cvsteer

#endif
