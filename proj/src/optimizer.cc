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

#include "cvsteer/optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "cvsteer/golden_section.h"

namespace cvsteer {

namespace {

bool contains(const std::vector<std::size_t> &v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::array<std::size_t, 3> tripartite_triple(const std::vector<std::size_t> &active) {
    if (contains(active, 0) && contains(active, 1) && contains(active, 2)) {
        return {1, 0, 2};
    }
    if (active.size() < 3) {
        throw std::invalid_argument("tripartite objective needs at least three active modes");
    }
    return {active[0], active[1], active[2]};
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body) {
    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<double> uniform_grid(double from, double to, std::size_t steps) {
    if (steps < 2) {
        throw std::invalid_argument("sweep needs at least two steps");
    }
    if (!(from <= to)) {
        throw std::invalid_argument(fmt::format("sweep range [{}, {}] is empty", from, to));
    }
    std::vector<double> grid(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        grid[k] = k + 1 == steps ? to : from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    return grid;
}

int regime_at(const NetworkSpec &spec, double loss) {
    BuiltNetwork net = build(inject_asymmetric_loss(spec, loss));
    return collective_steering_report(net.state, net.active_modes).regime_count;
}

}  // namespace

const char *objective_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::MaxSteeringNumber:
            return "max-steering";
        case ObjectiveKind::MeanSteeringNumber:
            return "mean-steering";
        case ObjectiveKind::TripartiteValue:
            return "tripartite";
    }
    return "unknown";
}

ObjectiveKind parse_objective(const std::string &text) {
    for (auto kind : {ObjectiveKind::MaxSteeringNumber, ObjectiveKind::MeanSteeringNumber,
                      ObjectiveKind::TripartiteValue}) {
        if (text == objective_name(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument(
        fmt::format("unknown objective '{}', expected max-steering, mean-steering or tripartite", text));
}

double evaluate_objective(const NetworkSpec &spec, ObjectiveKind kind) {
    BuiltNetwork net = build(spec);
    if (kind == ObjectiveKind::TripartiteValue) {
        return tripartite_criteria(net.state, tripartite_triple(net.active_modes)).product_of_variances;
    }
    SteeringReport report = collective_steering_report(net.state, net.active_modes);
    return kind == ObjectiveKind::MaxSteeringNumber ? report.max_steering_number() : report.mean_steering_number();
}

ProbeConfig ProbeConfig::defaults_for(const std::vector<std::size_t> &active_modes) {
    ProbeConfig probes;
    if (contains(active_modes, 0) && contains(active_modes, 1) && contains(active_modes, 2)) {
        probes.monogamy_a = 1;
        probes.monogamy_b = {0};
        probes.monogamy_c = {2};
        probes.tripartite = std::array<std::size_t, 3>{1, 0, 2};
    }
    return probes;
}

std::vector<double> SweepResult::parameter_values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        out.push_back(p.value);
    }
    return out;
}

NetworkSpec apply_parameter(const NetworkSpec &spec, const std::string &parameter, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(fmt::format("{} value {} outside [0, 1]", parameter, value));
    }
    if (parameter == kLossParameter) {
        return inject_asymmetric_loss(spec, value);
    }
    if (spec.find_beamsplitter(parameter) == nullptr) {
        throw std::invalid_argument(fmt::format("unknown sweep parameter '{}'", parameter));
    }
    return with_reflectivity(spec, parameter, value * 100.0);
}

SweepPoint evaluate_point(const NetworkSpec &spec, const std::string &parameter, double value,
                          const std::optional<ProbeConfig> &probes) {
    BuiltNetwork net = build(apply_parameter(spec, parameter, value));
    SweepPoint point;
    point.value = value;
    point.active_modes = net.active_modes;
    point.report = collective_steering_report(net.state, net.active_modes);
    ProbeConfig p = probes ? *probes : ProbeConfig::defaults_for(net.active_modes);
    if (p.monogamy_a && !p.monogamy_b.empty() && !p.monogamy_c.empty()) {
        std::size_t a = *p.monogamy_a;
        point.monogamy = monogamy_check(net.state, a, p.monogamy_b, p.monogamy_c);
        std::vector<std::size_t> joint = p.monogamy_b;
        joint.insert(joint.end(), p.monogamy_c.begin(), p.monogamy_c.end());
        point.s_a_bc = steering_product(net.state, a, joint).product;
        if (p.monogamy_b.size() == 1 && p.monogamy_c.size() == 1) {
            std::vector<std::size_t> just_a = {a};
            point.s_b_a = steering_product(net.state, p.monogamy_b[0], just_a).product;
            point.s_c_a = steering_product(net.state, p.monogamy_c[0], just_a).product;
        }
    }
    if (p.tripartite) {
        point.tripartite = tripartite_criteria(net.state, *p.tripartite);
    }
    return point;
}

SweepResult sweep(const NetworkSpec &spec, const std::string &parameter, double from, double to, std::size_t steps,
                  const std::optional<ProbeConfig> &probes, unsigned threads) {
    spec.validate();
    if (parameter != kLossParameter && spec.find_beamsplitter(parameter) == nullptr) {
        throw std::invalid_argument(fmt::format("unknown sweep parameter '{}'", parameter));
    }
    if (from < 0.0 || to > 1.0) {
        throw std::invalid_argument(fmt::format("sweep range [{}, {}] outside [0, 1]", from, to));
    }
    std::vector<double> grid = uniform_grid(from, to, steps);
    // Probes are fixed by the unswept network so every row reports the same quantities.
    std::optional<ProbeConfig> fixed = probes ? probes : ProbeConfig::defaults_for(build(spec).active_modes);
    SweepResult result;
    result.parameter_name = parameter;
    result.points.resize(steps);
    parallel_for(steps, threads,
                 [&](std::size_t k) { result.points[k] = evaluate_point(spec, parameter, grid[k], fixed); });
    return result;
}

ReflectivityOptimum optimize_reflectivity(const NetworkSpec &spec, const std::string &splitter, ObjectiveKind objective,
                                          double tolerance, std::size_t coarse_points) {
    if (spec.find_beamsplitter(splitter) == nullptr) {
        throw std::invalid_argument(fmt::format("network has no splitter named '{}'", splitter));
    }
    if (coarse_points < 3) {
        throw std::invalid_argument("coarse grid needs at least three points");
    }
    std::size_t evaluations = 0;
    auto f = [&](double r) {
        ++evaluations;
        return evaluate_objective(with_reflectivity(spec, splitter, r * 100.0), objective);
    };
    std::vector<double> grid = uniform_grid(0.0, 1.0, coarse_points);
    std::size_t best = 0;
    double best_value = f(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double v = f(grid[k]);
        if (v < best_value) {
            best = k;
            best_value = v;
        }
    }
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[std::min(best + 1, grid.size() - 1)];
    ScalarMinimum refined = golden_section_minimize(f, lo, hi, tolerance);

    ReflectivityOptimum out;
    out.parameter = splitter;
    out.objective = objective;
    if (refined.value <= best_value) {
        out.r_star = refined.x;
        out.objective_value = refined.value;
    } else {
        out.r_star = grid[best];
        out.objective_value = best_value;
    }
    out.evaluations = evaluations;
    return out;
}

RegimeScan loss_regime_scan(const NetworkSpec &spec, double from, double to, std::size_t steps, unsigned threads) {
    RegimeScan scan;
    scan.sweep = sweep(spec, kLossParameter, from, to, steps, std::nullopt, threads);
    const auto &pts = scan.sweep.points;

    std::set<int> visited;
    for (const auto &p : pts) {
        visited.insert(p.report.regime_count);
    }
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double a = pts[k].value;
        int ca = pts[k].report.regime_count;
        const double b_end = pts[k + 1].value;
        const int cb_end = pts[k + 1].report.regime_count;
        // Several transitions may share one grid cell; peel them off left to right.
        while (ca != cb_end) {
            double lo = a;
            double hi = b_end;
            int chi = cb_end;
            while (hi - lo > kTransitionTolerance) {
                double mid = 0.5 * (lo + hi);
                int cm = regime_at(spec, mid);
                if (cm == ca) {
                    lo = mid;
                } else {
                    hi = mid;
                    chi = cm;
                }
            }
            scan.transitions.push_back({0.5 * (lo + hi), ca, chi});
            visited.insert(chi);
            a = hi;
            ca = chi;
        }
    }
    scan.regimes_visited.assign(visited.rbegin(), visited.rend());
    return scan;
}

}  // namespace cvsteer
