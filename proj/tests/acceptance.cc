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

// Acceptance suite. Prints one PASS/FAIL line per criterion followed by
// indented detail lines; exit status is nonzero if any selected criterion fails.
//
//   cvsteer_acceptance            run everything
//   cvsteer_acceptance --only 4   run criterion 4

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "cvsteer/cli.h"
#include "cvsteer/network.h"
#include "cvsteer/optimizer.h"
#include "cvsteer/oracle.h"
#include "cvsteer/steering.h"
#include "test_support.h"

namespace cvsteer {
namespace {

// Pinned tolerances and budgets.
constexpr double kMonogamyFloor = 1.0 - kMonogamyTolerance;
constexpr double kLossBoundFloor = 1.0 - 1e-9;
constexpr double kEvenSymmetryTolerance = 1e-3;
constexpr double kOddBandLow = 0.503;
constexpr double kOddBandHigh = 0.520;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kMirrorTolerance = 1e-12;
constexpr double kPureSqueezingDb = 10.0;
constexpr double kRegimeScanMaxLoss = 0.40;
constexpr std::size_t kRegimeScanSteps = 81;
constexpr std::size_t kMonogamySweepPoints = 101;
constexpr std::size_t kRandomMonogamySpecs = 200;
constexpr std::size_t kOracleRandomSpecs = 50;
constexpr std::size_t kOracleSamples = 1000000;
constexpr std::uint64_t kOracleSeed = 7;
constexpr double kBudgetPresetSeconds = 1.0;
constexpr double kBudgetOptimizeSeconds = 10.0;
constexpr double kBudgetMonogamySeconds = 30.0;
constexpr double kBudgetRegimeSeconds = 60.0;
constexpr double kBudgetOracleSeconds = 300.0;

// Published optima for the odd chains, as fractions.
constexpr double kPrintedOddOptima[] = {0.511, 0.508, 0.506};

// Per-rail detection efficiencies for the regime scan: 98% nominal with
// small fixed asymmetries so degenerate transitions can separate.
const std::vector<double> kRegimeEfficiencies = {0.985, 0.98, 0.975, 0.99, 0.97, 0.995, 0.98, 1.0};

struct Outcome {
    bool passed = false;
    std::string summary;
    std::vector<std::string> details;
};

class Stopwatch {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SteeringReport report_for(const NetworkSpec &spec) {
    BuiltNetwork net = build(spec);
    return collective_steering_report(net.state, net.active_modes);
}

std::vector<std::size_t> others(std::size_t n, std::size_t j) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k) {
        if (k != j) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<double> preset_margins() {
    std::vector<double> margins;
    for (int n = 2; n <= 8; ++n) {
        margins.push_back(1.0 - report_for(chain_preset(n)).max_steering_number());
    }
    return margins;
}

Outcome preset_steering() {
    Outcome o;
    Stopwatch clock;
    bool all = true;
    for (int n = 2; n <= 8; ++n) {
        SteeringReport r = report_for(chain_preset(n));
        std::vector<double> s2;
        bool every = r.entries.size() == static_cast<std::size_t>(n);
        for (const auto &e : r.entries) {
            s2.push_back(e.value.steering_number);
            every = every && e.value.steering_number < kSteeringThreshold;
        }
        all = all && every;
        o.details.push_back(fmt::format("N={} S^2={:.4f} margin={:.4f}", n, fmt::join(s2, ","),
                                        1.0 - r.max_steering_number()));
    }
    double t = clock.seconds();
    o.passed = all && t < kBudgetPresetSeconds;
    o.summary = fmt::format("all steering numbers < 1 for N=2..8: {} ({:.3f} s, budget {} s)", all, t,
                            kBudgetPresetSeconds);
    return o;
}

Outcome weakening_with_n() {
    Outcome o;
    std::vector<double> m = preset_margins();
    bool decreasing = true;
    for (std::size_t k = 1; k < m.size(); ++k) {
        decreasing = decreasing && m[k] < m[k - 1];
    }
    o.passed = decreasing;
    o.summary = fmt::format("min margin strictly decreasing N=2..8: {}", decreasing);
    o.details.push_back(fmt::format("margins {:.6f}", fmt::join(m, " ")));
    return o;
}

Outcome even_symmetry() {
    Outcome o;
    bool all = true;
    double slowest = 0.0;
    auto check = [&](const NetworkSpec &spec, const std::string &label) {
        Stopwatch clock;
        ReflectivityOptimum best = optimize_reflectivity(spec, "VBS_12", kDefaultObjective);
        double t = clock.seconds();
        slowest = std::max(slowest, t);
        bool ok = std::abs(best.r_star - 0.5) <= kEvenSymmetryTolerance && t < kBudgetOptimizeSeconds;
        all = all && ok;
        o.details.push_back(fmt::format("{}: R*={:.5f} ({:.2f} s) {}", label, best.r_star, t, ok ? "ok" : "off"));
    };
    for (int n : {2, 4, 6, 8}) {
        check(chain_preset(n), fmt::format("measured inputs N={}", n));
    }
    for (int n = 2; n <= 8; ++n) {
        check(with_symmetric_pure_inputs(chain_preset(n), kPureSqueezingDb),
              fmt::format("pure {} dB inputs N={}", kPureSqueezingDb, n));
    }
    o.passed = all;
    o.summary = fmt::format("R* = 0.500 +/- {} on VBS_12 (objective {}, slowest case {:.2f} s, budget {} s)",
                            kEvenSymmetryTolerance, objective_name(kDefaultObjective), slowest,
                            kBudgetOptimizeSeconds);
    return o;
}

Outcome odd_bias() {
    Outcome o;
    const int sizes[] = {3, 5, 7};
    std::vector<double> chosen;
    for (ObjectiveKind kind :
         {ObjectiveKind::MeanSteeringNumber, ObjectiveKind::MaxSteeringNumber, ObjectiveKind::TripartiteValue}) {
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < 3; ++i) {
            ReflectivityOptimum best = optimize_reflectivity(chain_preset(sizes[i]), "VBS_12", kind);
            parts.push_back(fmt::format("N={} R*={:.4f} residual={:+.4f}", sizes[i], best.r_star,
                                        best.r_star - kPrintedOddOptima[i]));
            if (kind == kDefaultObjective) {
                chosen.push_back(best.r_star);
            }
        }
        o.details.push_back(fmt::format("{}: {}", objective_name(kind), fmt::join(parts, "; ")));
    }
    bool above = std::all_of(chosen.begin(), chosen.end(), [](double r) { return r > 0.5; });
    bool band = chosen[0] >= kOddBandLow && chosen[0] <= kOddBandHigh;
    bool decreasing = chosen[0] > chosen[1] && chosen[1] > chosen[2];
    o.passed = above && band && decreasing;
    o.summary = fmt::format("objective {}: R* {:.4f} > 0.5: {}, N=3 in [{}, {}]: {}, decreasing in N: {}",
                            objective_name(kDefaultObjective), fmt::join(chosen, "/"), above, kOddBandLow,
                            kOddBandHigh, band, decreasing);
    return o;
}

SweepResult second_splitter_sweep() {
    return sweep(chain_preset(3), "VBS_31", 0.0, 1.0, kMonogamySweepPoints);
}

Outcome monogamy_suite() {
    Outcome o;
    Stopwatch clock;
    SweepResult s = second_splitter_sweep();
    double sweep_min = INFINITY;
    for (const auto &p : s.points) {
        sweep_min = std::min(sweep_min, p.monogamy->product);
    }
    double random_min = INFINITY;
    std::size_t checks = 0;
    for (const NetworkSpec &spec : testing::random_specs(kRandomMonogamySpecs, 2024)) {
        BuiltNetwork net = build(spec);
        const auto &act = net.active_modes;
        for (std::size_t ai = 0; ai < act.size(); ++ai) {
            std::vector<std::size_t> rest;
            for (std::size_t k : others(act.size(), ai)) {
                rest.push_back(act[k]);
            }
            // Every split of the rest into two nonempty groups, up to 2^6 per steered mode.
            for (std::uint32_t mask = 1; mask + 1 < (1u << rest.size()); ++mask) {
                std::vector<std::size_t> b, c;
                for (std::size_t k = 0; k < rest.size(); ++k) {
                    ((mask >> k) & 1u ? b : c).push_back(rest[k]);
                }
                random_min = std::min(random_min, monogamy_check(net.state, act[ai], b, c).product);
                ++checks;
            }
        }
    }
    double t = clock.seconds();
    o.passed = sweep_min >= kMonogamyFloor && random_min >= kMonogamyFloor && t < kBudgetMonogamySeconds;
    o.summary = fmt::format("min S_A|B*S_A|C: sweep {:.6f}, {} random specs {:.6f} (floor 1 - {}; {:.1f} s, budget {} s)",
                            sweep_min, kRandomMonogamySpecs, random_min, kMonogamyTolerance, t, kBudgetMonogamySeconds);
    o.details.push_back(fmt::format("{} sweep points, {} random bipartitions checked", s.points.size(), checks));
    return o;
}

Outcome collaboration_regime() {
    Outcome o;
    SweepResult s = second_splitter_sweep();
    std::size_t centre = s.points.size() / 2;
    auto collaborative = [](const SweepPoint &p) {
        return p.monogamy->s_a_b >= kSteeringThreshold && p.monogamy->s_a_c >= kSteeringThreshold &&
               *p.s_a_bc < kSteeringThreshold;
    };
    auto singleton = [](const SweepPoint &p) {
        return p.monogamy->s_a_b < kSteeringThreshold || p.monogamy->s_a_c < kSteeringThreshold;
    };
    bool centre_ok = collaborative(s.points[centre]);
    std::size_t lo = centre, hi = centre;
    if (centre_ok) {
        while (lo > 0 && collaborative(s.points[lo - 1])) {
            --lo;
        }
        while (hi + 1 < s.points.size() && collaborative(s.points[hi + 1])) {
            ++hi;
        }
    }
    bool singleton_only_asymmetric = true;
    double nearest_singleton = INFINITY;
    std::size_t singleton_points = 0;
    for (const auto &p : s.points) {
        if (singleton(p)) {
            ++singleton_points;
            nearest_singleton = std::min(nearest_singleton, std::abs(p.value - 0.5));
            singleton_only_asymmetric = singleton_only_asymmetric && std::abs(p.value - 0.5) > 1e-12;
        }
    }
    o.passed = centre_ok && singleton_only_asymmetric && singleton_points > 0;
    o.summary = fmt::format("collaboration-only interval R_31 in [{:.2f}, {:.2f}] contains 0.5: {}; singleton steering "
                            "only away from 0.5: {}",
                            s.points[lo].value, s.points[hi].value, centre_ok, singleton_only_asymmetric);
    const SweepPoint &c = s.points[centre];
    o.details.push_back(fmt::format("at R_31=0.5: S_A|B={:.4f} S_A|C={:.4f} S_A|BC={:.4f}", c.monogamy->s_a_b,
                                    c.monogamy->s_a_c, *c.s_a_bc));
    o.details.push_back(fmt::format("{} points with singleton steering of A; closest to balance |R_31-0.5|={:.2f}",
                                    singleton_points, nearest_singleton));
    return o;
}

Outcome loss_bound() {
    Outcome o;
    bool all = true;
    std::vector<std::string> parts;
    for (std::size_t arm : {std::size_t{0}, std::size_t{1}}) {
        std::size_t steered = 1 - arm;
        for (int step = 5; step <= 10; ++step) {
            double loss = step / 10.0;
            NetworkSpec spec = chain_preset(2);
            spec.asymmetric_loss_arm = arm;
            GaussianState s = build(inject_asymmetric_loss(spec, loss)).state;
            std::vector<std::size_t> steering = {arm};
            double value = steering_product(s, steered, steering).product;
            all = all && value >= kLossBoundFloor;
            parts.push_back(fmt::format("{:.1f}:{:.4f}", loss, value));
        }
        o.details.push_back(fmt::format("loss on rail {}, S_{}|{} by loss: {}", arm + 1, steered + 1, arm + 1,
                                        fmt::join(parts, " ")));
        parts.clear();
    }
    o.passed = all;
    o.summary = fmt::format("S >= 1 - 1e-9 for losses 0.5..1.0 on the steering rail of N=2: {}", all);
    return o;
}

Outcome eight_regimes() {
    Outcome o;
    Stopwatch clock;
    RegimeScan best;
    std::size_t best_arm = 0;
    for (std::size_t arm : {std::size_t{0}, std::size_t{1}}) {
        NetworkSpec spec = chain_preset(7);
        spec.efficiencies = kRegimeEfficiencies;
        spec.asymmetric_loss_arm = arm;
        RegimeScan scan = loss_regime_scan(spec, 0.0, kRegimeScanMaxLoss, kRegimeScanSteps);
        std::vector<std::string> moves;
        for (const auto &t : scan.transitions) {
            moves.push_back(fmt::format("{}->{} at {:.5f}", t.count_before, t.count_after, t.loss));
        }
        o.details.push_back(fmt::format("loss on rail {}: regimes visited {} ({} distinct); transitions: {}", arm + 1,
                                        fmt::join(scan.regimes_visited, ","), scan.distinct_regime_count(),
                                        moves.empty() ? "none" : fmt::format("{}", fmt::join(moves, ", "))));
        if (arm == 0 || scan.distinct_regime_count() > best.distinct_regime_count()) {
            best = std::move(scan);
            best_arm = arm;
        }
    }
    double t = clock.seconds();
    std::optional<double> top_exit;
    for (const auto &tr : best.transitions) {
        if (tr.count_before == 7) {
            top_exit = tr.loss;
            break;
        }
    }
    bool eight = best.distinct_regime_count() == 8 && best.regimes_visited.front() == 7 &&
                 best.regimes_visited.back() == 0;
    bool exit_ok = top_exit && *top_exit <= kRegimeScanMaxLoss;
    o.passed = eight && exit_ok && t < kBudgetRegimeSeconds;
    o.summary = fmt::format("N=7, efficiencies ~0.98, loss 0..{}: {} distinct regimes (need 8, 7..0) on rail {}; "
                            "top-regime exit {} ({:.1f} s, budget {} s)",
                            kRegimeScanMaxLoss, best.distinct_regime_count(), best_arm + 1,
                            top_exit ? fmt::format("{:.5f}", *top_exit) : std::string("none"), t,
                            kBudgetRegimeSeconds);
    return o;
}

Outcome tripartite_entanglement() {
    Outcome o;
    NetworkSpec measured = chain_preset(3);
    NetworkSpec pure = with_symmetric_pure_inputs(with_reflectivity(measured, "VBS_12", 50.0), kPureSqueezingDb);
    const std::array<std::size_t, 3> modes = {1, 0, 2};
    TripartiteVerdict a = tripartite_criteria(build(measured).state, modes);
    TripartiteVerdict b = tripartite_criteria(build(pure).state, modes);
    o.passed = a.product_of_variances < kGenuineEntanglementThreshold &&
               b.product_of_variances < kGenuineSteeringThreshold;
    o.summary = fmt::format("measured inputs {:.4f} < {}: {}; pure {} dB inputs {:.4f} < {}: {}", a.product_of_variances,
                            kGenuineEntanglementThreshold, a.genuine_entanglement, kPureSqueezingDb,
                            b.product_of_variances, kGenuineSteeringThreshold, b.genuine_steering);
    o.details.push_back(fmt::format("roles: mode 1 = rail 2, modes 2,3 = rails 1,3; VBS_12 {}%/50%, VBS_31 50%",
                                    measured.beamsplitter("VBS_12").reflectivity_percent));
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    Stopwatch clock;
    auto dir = testing::fresh_temp_dir("acceptance-oracle");
    bool exits_ok = true;
    double worst = 0.0;
    std::size_t comparisons = 0;
    std::vector<std::pair<std::string, std::size_t>> runs = {
        {"n2", kOracleRandomSpecs}, {"n3", 0}, {"n5", 0}, {"n7", 0}};
    for (const auto &[preset, random] : runs) {
        std::vector<std::string> args = {"cvsteer",   "--preset",  preset,
                                         "--seed",    std::to_string(kOracleSeed),
                                         "--out",     (dir / preset).string(),
                                         "verify",    "--samples", std::to_string(kOracleSamples),
                                         "--random-specs", std::to_string(random)};
        std::vector<const char *> argv;
        for (const auto &a : args) {
            argv.push_back(a.c_str());
        }
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        exits_ok = exits_ok && code == kExitOk;
        auto doc = testing::read_json(dir / preset / "verify.json");
        double local = 0.0;
        for (const auto &c : doc["comparisons"]) {
            local = std::max(local, c["deviation_sigma"].get<double>());
            ++comparisons;
        }
        worst = std::max(worst, local);
        o.details.push_back(fmt::format("{}{}: exit {}, max deviation {:.3f} sigma", preset,
                                        random ? fmt::format(" + {} random specs", random) : std::string(), code,
                                        local));
    }
    double t = clock.seconds();
    o.passed = exits_ok && worst <= kOracleSigmaBound && t < kBudgetOracleSeconds;
    o.summary = fmt::format("{} inferred variances at {} samples, seed {}: max {:.3f} sigma (bound {}), verify exit 0: "
                            "{} ({:.0f} s, budget {} s)",
                            comparisons, kOracleSamples, kOracleSeed, worst, kOracleSigmaBound, exits_ok, t,
                            kBudgetOracleSeconds);
    return o;
}

Outcome trivial_identities() {
    Outcome o;
    double vacuum_worst = 0.0;
    int vacuum_regimes = 0;
    double mirror_worst = 0.0;
    std::vector<NetworkSpec> bases;
    for (int n = 2; n <= 8; ++n) {
        bases.push_back(chain_preset(n));
    }
    for (const NetworkSpec &spec : testing::random_specs(50, 77)) {
        bases.push_back(spec);
    }
    for (const NetworkSpec &base : bases) {
        NetworkSpec vac = base;
        for (auto &in : vac.inputs) {
            in = InputMode::vacuum();
        }
        SteeringReport r = report_for(vac);
        for (const auto &e : r.entries) {
            vacuum_worst = std::max({vacuum_worst, std::abs(e.value.product - 1.0),
                                     std::abs(e.value.inferred_var_x - 1.0), std::abs(e.value.inferred_var_p - 1.0)});
        }
        vacuum_regimes = std::max(vacuum_regimes, r.regime_count);

        NetworkSpec mirror = base;
        for (auto &bs : mirror.beamsplitters) {
            bs.reflectivity_percent = 100.0;
        }
        mirror.losses.clear();
        mirror.efficiencies.clear();
        BuiltNetwork net = build(mirror);
        SteeringReport mr = collective_steering_report(net.state, net.active_modes);
        for (const auto &e : mr.entries) {
            const InputMode &in = mirror.inputs[e.mode];
            double expected = std::pow(10.0, (in.var_sq_dB + in.var_anti_dB) / 10.0);
            mirror_worst = std::max(mirror_worst, std::abs(e.value.steering_number - expected) / expected);
        }
    }
    o.passed = vacuum_worst <= kIdentityTolerance && vacuum_regimes == 0 && mirror_worst <= kMirrorTolerance;
    o.summary = fmt::format("vacuum |S-1| max {:.2e} (tol {}), regime_count max {}; all-mirror relative error max "
                            "{:.2e} (tol {})",
                            vacuum_worst, kIdentityTolerance, vacuum_regimes, mirror_worst, kMirrorTolerance);
    o.details.push_back(fmt::format("{} networks (presets n2..n8 and 50 random)", bases.size()));
    return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> &criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
        {"preset steering", preset_steering},
        {"weakening with N", weakening_with_n},
        {"even-N symmetry", even_symmetry},
        {"odd-N bias", odd_bias},
        {"monogamy", monogamy_suite},
        {"collaboration-only regime", collaboration_regime},
        {"50% loss bound", loss_bound},
        {"eight regimes", eight_regimes},
        {"genuine tripartite entanglement", tripartite_entanglement},
        {"oracle equivalence", oracle_equivalence},
        {"trivial identities", trivial_identities},
    };
    return all;
}

}  // namespace
}  // namespace cvsteer

int main(int argc, char **argv) {
    using namespace cvsteer;
    std::size_t only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = static_cast<std::size_t>(std::stoul(argv[++i]));
        } else {
            std::cerr << "usage: cvsteer_acceptance [--only N]\n";
            return 2;
        }
    }
    const auto &all = criteria();
    if (only > all.size()) {
        std::cerr << "no criterion " << only << '\n';
        return 2;
    }
    bool ok = true;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (only != 0 && k + 1 != only) {
            continue;
        }
        Outcome o;
        try {
            o = all[k].second();
        } catch (const std::exception &e) {
            o.passed = false;
            o.summary = fmt::format("threw: {}", e.what());
        }
        ok = ok && o.passed;
        std::cout << fmt::format("AC{} {} [{}] {}\n", k + 1, o.passed ? "PASS" : "FAIL", all[k].first, o.summary);
        for (const auto &d : o.details) {
            std::cout << "    " << d << '\n';
        }
        std::cout.flush();
    }
    return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
