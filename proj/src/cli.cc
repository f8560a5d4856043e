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

#include "cvsteer/cli.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "cvsteer/network.h"
#include "cvsteer/network_io.h"
#include "cvsteer/optimizer.h"
#include "cvsteer/oracle.h"
#include "cvsteer/report_io.h"
#include "cvsteer/steering.h"

#ifndef CVSTEER_VERSION
#define CVSTEER_VERSION "dev"
#endif

namespace cvsteer {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
    std::string preset;
    std::string spec_path;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::string format;
    std::vector<std::string> set_overrides;
    std::optional<double> loss;
    std::optional<double> efficiency;
    std::optional<std::size_t> loss_arm;
};

struct SweepOptions {
    std::string param;
    double from = 0.0;
    double to = 1.0;
    std::size_t steps = 101;
    std::string monogamy;
    std::string tripartite;
};

struct OptimizeOptions {
    std::string splitter = "VBS_12";
    std::string objective = objective_name(kDefaultObjective);
    double tolerance = kDefaultReflectivityTolerance;
    std::size_t grid = kCoarseGridPoints;
};

struct RegimeOptions {
    double from = 0.0;
    double to = 0.4;
    std::size_t steps = 81;
};

struct VerifyOptions {
    std::size_t samples = 1000000;
    std::size_t random_specs = 0;
    std::string export_path;
};

std::string now_utc() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

std::vector<std::size_t> parse_rail_list(const std::string &text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long long v = std::stoll(item, &pos);
        if (pos != item.size() || v < 1) {
            throw std::invalid_argument(fmt::format("bad rail index '{}'", item));
        }
        out.push_back(static_cast<std::size_t>(v - 1));
    }
    if (out.empty()) {
        throw std::invalid_argument(fmt::format("empty rail list '{}'", text));
    }
    return out;
}

class Session {
   public:
    Session(const GlobalOptions &g, std::string command, std::ostream &out)
        : global_(g), out_(out) {
        manifest_.command = std::move(command);
        manifest_.tool_version = CVSTEER_VERSION;
        manifest_.timestamp = now_utc();
    }

    NetworkSpec load_spec() {
        if (global_.preset.empty() == global_.spec_path.empty()) {
            throw SpecError("", "exactly one of --preset or --spec is required");
        }
        NetworkSpec spec;
        if (!global_.preset.empty()) {
            spec = preset_by_id(global_.preset);
            manifest_.source = "preset:" + global_.preset;
        } else {
            spec = load_network_spec(global_.spec_path);
            manifest_.source = "spec:" + global_.spec_path;
        }
        for (const auto &item : global_.set_overrides) {
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument(fmt::format("--set expects NAME=PERCENT, got '{}'", item));
            }
            std::string name = item.substr(0, eq);
            double percent = std::stod(item.substr(eq + 1));
            spec = with_reflectivity(spec, name, percent);
            manifest_.overrides[name + "_percent"] = format_number(percent);
        }
        if (global_.loss_arm) {
            if (*global_.loss_arm < 1 || *global_.loss_arm > spec.num_modes()) {
                throw std::invalid_argument("--loss-arm out of range");
            }
            spec.asymmetric_loss_arm = *global_.loss_arm - 1;
            manifest_.overrides["loss_arm"] = std::to_string(*global_.loss_arm);
        }
        if (global_.efficiency) {
            spec.efficiencies.assign(spec.num_modes(), *global_.efficiency);
            manifest_.overrides["efficiency_fraction"] = format_number(*global_.efficiency);
        }
        if (global_.loss) {
            spec = inject_asymmetric_loss(spec, *global_.loss);
            manifest_.overrides["loss_fraction"] = format_number(*global_.loss);
        }
        spec.validate();
        return spec;
    }

    RunManifest &manifest() { return manifest_; }

    std::string format_or(const char *fallback) const {
        std::string f = global_.format.empty() ? fallback : global_.format;
        if (f != "json" && f != "csv") {
            throw std::invalid_argument(fmt::format("--format must be json or csv, got '{}'", f));
        }
        return f;
    }

    fs::path path_for(const std::string &name) {
        fs::create_directories(global_.out_dir);
        manifest_.outputs.push_back(name);
        return fs::path(global_.out_dir) / name;
    }

    void write_json(const std::string &name, json payload) {
        fs::path p = path_for(name);
        payload["manifest"] = manifest_to_json(manifest_);
        std::ofstream(p) << payload.dump(2) << '\n';
        out_ << "wrote " << p.string() << '\n';
    }

    template <typename Writer>
    void write_csv(const std::string &name, Writer &&writer) {
        fs::path p = path_for(name);
        {
            std::ofstream f(p);
            writer(f);
        }
        std::ofstream(p.string() + ".manifest.json") << manifest_to_json(manifest_).dump(2) << '\n';
        out_ << "wrote " << p.string() << '\n';
    }

   private:
    const GlobalOptions &global_;
    std::ostream &out_;
    RunManifest manifest_;
};

json network_summary(const NetworkSpec &spec, const BuiltNetwork &net) {
    json active = json::array();
    for (std::size_t m : net.active_modes) {
        active.push_back(m + 1);
    }
    return {{"spec", network_spec_to_json(spec)}, {"active_modes", active}, {"n_active", net.active_modes.size()}};
}

int cmd_simulate(const GlobalOptions &g, std::ostream &out) {
    Session session(g, "simulate", out);
    NetworkSpec spec = session.load_spec();
    std::string format = session.format_or("json");
    BuiltNetwork net = build(spec);
    SteeringReport report = collective_steering_report(net.state, net.active_modes);

    for (const auto &e : report.entries) {
        out << fmt::format("mode {}: S^2 = {:.6f} {}\n", e.mode + 1, e.value.steering_number,
                           e.value.steerable ? "steerable" : "not steerable");
    }
    out << fmt::format("regime_count = {}, full_inseparability = {}\n", report.regime_count,
                       report.full_inseparability);

    if (format == "csv") {
        session.write_csv("report.csv", [&](std::ostream &f) { write_steering_csv(report, f); });
        return kExitOk;
    }
    json payload = {{"network", network_summary(spec, net)}, {"steering", steering_report_to_json(report)}};
    if (net.active_modes.size() == 3) {
        json tri = json::array();
        const auto &a = net.active_modes;
        for (std::size_t first = 0; first < 3; ++first) {
            std::array<std::size_t, 3> modes = {a[first], a[(first + 1) % 3], a[(first + 2) % 3]};
            if (modes[1] > modes[2]) {
                std::swap(modes[1], modes[2]);
            }
            tri.push_back(tripartite_to_json(tripartite_criteria(net.state, modes), modes));
        }
        payload["tripartite"] = std::move(tri);
    }
    session.write_json("report.json", std::move(payload));
    return kExitOk;
}

int cmd_sweep(const GlobalOptions &g, const SweepOptions &o, std::ostream &out) {
    Session session(g, "sweep", out);
    NetworkSpec spec = session.load_spec();
    std::string format = session.format_or("csv");
    session.manifest().overrides["sweep_parameter"] = o.param;
    session.manifest().overrides["sweep_from_fraction"] = format_number(o.from);
    session.manifest().overrides["sweep_to_fraction"] = format_number(o.to);
    session.manifest().overrides["sweep_steps"] = std::to_string(o.steps);

    std::optional<ProbeConfig> probes;
    if (!o.monogamy.empty() || !o.tripartite.empty()) {
        probes = ProbeConfig{};
        if (!o.monogamy.empty()) {
            auto c1 = o.monogamy.find(':');
            auto c2 = o.monogamy.find(':', c1 == std::string::npos ? c1 : c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) {
                throw std::invalid_argument("--monogamy expects A:B:C, e.g. 2:1:3");
            }
            probes->monogamy_a = parse_rail_list(o.monogamy.substr(0, c1)).at(0);
            probes->monogamy_b = parse_rail_list(o.monogamy.substr(c1 + 1, c2 - c1 - 1));
            probes->monogamy_c = parse_rail_list(o.monogamy.substr(c2 + 1));
            session.manifest().overrides["monogamy"] = o.monogamy;
        }
        if (!o.tripartite.empty()) {
            auto modes = parse_rail_list(o.tripartite);
            if (modes.size() != 3) {
                throw std::invalid_argument("--tripartite expects three rails, e.g. 2,1,3");
            }
            probes->tripartite = std::array<std::size_t, 3>{modes[0], modes[1], modes[2]};
            session.manifest().overrides["tripartite"] = o.tripartite;
        }
    }
    SweepResult result = sweep(spec, o.param, o.from, o.to, o.steps, probes, g.threads);
    out << fmt::format("swept {} over {} points\n", o.param, result.points.size());
    if (format == "csv") {
        session.write_csv("sweep.csv", [&](std::ostream &f) { write_sweep_csv(result, f); });
    } else {
        session.write_json("sweep.json", sweep_to_json(result));
    }
    return kExitOk;
}

int cmd_optimize(const GlobalOptions &g, const OptimizeOptions &o, std::ostream &out) {
    Session session(g, "optimize", out);
    NetworkSpec spec = session.load_spec();
    session.format_or("json");
    ObjectiveKind kind = parse_objective(o.objective);
    session.manifest().overrides["objective"] = objective_name(kind);
    session.manifest().overrides["tolerance_fraction"] = format_number(o.tolerance);
    ReflectivityOptimum best = optimize_reflectivity(spec, o.splitter, kind, o.tolerance, o.grid);
    out << fmt::format("{}: R* = {:.6f} ({:.3f}%), {} = {:.9f} after {} evaluations\n", best.parameter, best.r_star,
                       100.0 * best.r_star, objective_name(kind), best.objective_value, best.evaluations);
    session.write_json("optimize.json", optimum_to_json(best));
    return kExitOk;
}

int cmd_regimes(const GlobalOptions &g, const RegimeOptions &o, std::ostream &out) {
    Session session(g, "regimes", out);
    NetworkSpec spec = session.load_spec();
    std::string format = session.format_or("csv");
    session.manifest().overrides["loss_from_fraction"] = format_number(o.from);
    session.manifest().overrides["loss_to_fraction"] = format_number(o.to);
    session.manifest().overrides["loss_steps"] = std::to_string(o.steps);
    RegimeScan scan = loss_regime_scan(spec, o.from, o.to, o.steps, g.threads);
    for (const auto &t : scan.transitions) {
        out << fmt::format("loss {:.5f}: {} -> {} steerable modes\n", t.loss, t.count_before, t.count_after);
    }
    out << fmt::format("{} distinct regimes visited\n", scan.distinct_regime_count());
    if (format == "csv") {
        session.write_csv("regimes.csv", [&](std::ostream &f) { write_sweep_csv(scan.sweep, f); });
    } else {
        session.write_json("regimes_sweep.json", sweep_to_json(scan.sweep));
    }
    session.write_json("transitions.json", regime_scan_to_json(scan));
    return kExitOk;
}

int cmd_verify(const GlobalOptions &g, const VerifyOptions &o, std::ostream &out) {
    Session session(g, "verify", out);
    session.format_or("json");
    session.manifest().seed = g.seed;
    session.manifest().overrides["samples"] = std::to_string(o.samples);
    session.manifest().overrides["random_specs"] = std::to_string(o.random_specs);

    OracleReport total;
    bool have_network = !g.preset.empty() || !g.spec_path.empty();
    if (have_network) {
        NetworkSpec spec = session.load_spec();
        BuiltNetwork net = build(spec);
        merge_into(total, verify_network(net, session.manifest().source, o.samples, g.seed, g.threads));
        if (!o.export_path.empty()) {
            SampleBatch batch = sample(net.state.marginal(net.active_modes), o.samples, g.seed, g.threads);
            std::ofstream f(o.export_path, std::ios::binary);
            write_batch(batch, f);
            out << "wrote " << o.export_path << '\n';
        }
    } else if (o.random_specs == 0) {
        throw SpecError("", "verify needs --preset, --spec or --random-specs");
    } else {
        session.manifest().source = "random";
    }
    for (std::size_t k = 0; k < o.random_specs; ++k) {
        std::uint64_t spec_seed = g.seed + 1000003 * (k + 1);
        BuiltNetwork net = build(random_network_spec(spec_seed));
        merge_into(total, verify_network(net, fmt::format("random:{}", spec_seed), o.samples, g.seed + k + 1,
                                         g.threads));
    }
    out << fmt::format("{} comparisons, max deviation {:.3f} sigma (bound {}): {}\n", total.comparisons.size(),
                       total.max_deviation_sigma, kOracleSigmaBound, total.passed ? "PASS" : "FAIL");
    session.write_json("verify.json", oracle_report_to_json(total));
    return total.passed ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Multipartite EPR steering in linear-optics networks"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    auto *preset = app.add_option("--preset", g.preset, "Chain preset n2..n8");
    app.add_option("--spec", g.spec_path, "Network spec JSON file")->excludes(preset);
    app.add_option("--out", g.out_dir, "Output directory");
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--threads", g.threads, "Worker thread cap")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--set", g.set_overrides, "Reflectivity override NAME=PERCENT (repeatable)");
    app.add_option("--loss", g.loss, "Asymmetric loss fraction after VBS_12")->check(CLI::Range(0.0, 1.0));
    app.add_option("--loss-arm", g.loss_arm, "Rail (1-based) receiving asymmetric loss");
    app.add_option("--efficiency", g.efficiency, "Uniform per-rail detection efficiency")
        ->check(CLI::Range(0.0, 1.0));

    auto *simulate = app.add_subcommand("simulate", "Steering report for one network");

    SweepOptions so;
    auto *sweep_cmd = app.add_subcommand("sweep", "Scan one reflectivity (fraction) or loss_fraction");
    sweep_cmd->add_option("--param", so.param, "Splitter name or loss_fraction")->required();
    sweep_cmd->add_option("--from", so.from, "Start (fraction)");
    sweep_cmd->add_option("--to", so.to, "End (fraction)");
    sweep_cmd->add_option("--steps", so.steps, "Grid points");
    sweep_cmd->add_option("--monogamy", so.monogamy, "Probe A:B:C with 1-based rails, e.g. 2:1:3");
    sweep_cmd->add_option("--tripartite", so.tripartite, "Mode triple, first plays mode 1, e.g. 2,1,3");

    OptimizeOptions oo;
    auto *optimize = app.add_subcommand("optimize", "Optimise one splitter reflectivity");
    optimize->add_option("--bs", oo.splitter, "Splitter name");
    optimize->add_option("--objective", oo.objective, "max-steering | mean-steering | tripartite");
    optimize->add_option("--tol", oo.tolerance, "Tolerance in R (fraction)");
    optimize->add_option("--grid", oo.grid, "Coarse grid points");

    RegimeOptions ro;
    auto *regimes = app.add_subcommand("regimes", "Asymmetric loss scan with regime classification");
    regimes->add_option("--from", ro.from, "Start loss fraction");
    regimes->add_option("--to", ro.to, "End loss fraction");
    regimes->add_option("--steps", ro.steps, "Grid points");

    VerifyOptions vo;
    auto *verify = app.add_subcommand("verify", "Monte Carlo check of analytic inferred variances");
    verify->add_option("--samples", vo.samples, "Samples per network");
    verify->add_option("--random-specs", vo.random_specs, "Additional randomised networks");
    verify->add_option("--export", vo.export_path, "Write the raw sample batch here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidSpec;
    }

    try {
        if (*simulate) {
            return cmd_simulate(g, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(g, so, out);
        }
        if (*optimize) {
            return cmd_optimize(g, oo, out);
        }
        if (*regimes) {
            return cmd_regimes(g, ro, out);
        }
        if (*verify) {
            return cmd_verify(g, vo, out);
        }
    } catch (const SpecError &e) {
        err << "invalid spec: " << e.what() << '\n';
        return kExitInvalidSpec;
    } catch (const UnphysicalStateError &e) {
        err << "unphysical state: " << e.what() << '\n';
        return kExitUnphysicalState;
    } catch (const std::invalid_argument &e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitInvalidSpec;
    } catch (const std::out_of_range &e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitInvalidSpec;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
    return kExitInvalidSpec;
}

}  // namespace cvsteer
