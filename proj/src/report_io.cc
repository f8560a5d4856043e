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

#include "cvsteer/report_io.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace cvsteer {

using nlohmann::json;

namespace {

json one_based(const std::vector<std::size_t> &modes) {
    json out = json::array();
    for (std::size_t m : modes) {
        out.push_back(m + 1);
    }
    return out;
}

std::string optional_cell(const std::optional<double> &v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

json manifest_to_json(const RunManifest &m) {
    json out = {{"command", m.command},
                {"source", m.source},
                {"overrides", m.overrides},
                {"outputs", m.outputs},
                {"tool_version", m.tool_version},
                {"timestamp", m.timestamp}};
    out["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    return out;
}

json steering_report_to_json(const SteeringReport &report) {
    json entries = json::array();
    for (const auto &e : report.entries) {
        entries.push_back({{"mode", e.mode + 1},
                           {"steering_set", one_based(e.steering_set)},
                           {"inferred_var_x", e.value.inferred_var_x},
                           {"inferred_var_p", e.value.inferred_var_p},
                           {"S", e.value.product},
                           {"steering_number", e.value.steering_number},
                           {"steerable", e.value.steerable},
                           {"singular", e.value.singular}});
    }
    return {{"entries", std::move(entries)},
            {"full_inseparability", report.full_inseparability},
            {"regime_count", report.regime_count}};
}

json tripartite_to_json(const TripartiteVerdict &v, const std::array<std::size_t, 3> &modes) {
    return {{"modes", {modes[0] + 1, modes[1] + 1, modes[2] + 1}},
            {"var_u", v.var_u},
            {"var_v", v.var_v},
            {"product_of_variances", v.product_of_variances},
            {"genuine_entanglement", v.genuine_entanglement},
            {"genuine_steering", v.genuine_steering}};
}

json optimum_to_json(const ReflectivityOptimum &o) {
    return {{"parameter", o.parameter},
            {"R_star", o.r_star},
            {"objective_kind", objective_name(o.objective)},
            {"objective_value", o.objective_value},
            {"evaluations", o.evaluations}};
}

json regime_scan_to_json(const RegimeScan &scan) {
    json transitions = json::array();
    for (const auto &t : scan.transitions) {
        transitions.push_back({{"loss", t.loss}, {"count_before", t.count_before}, {"count_after", t.count_after}});
    }
    return {{"transitions", std::move(transitions)},
            {"regimes_visited", scan.regimes_visited},
            {"distinct_regime_count", scan.distinct_regime_count()},
            {"transition_tolerance", kTransitionTolerance}};
}

json oracle_report_to_json(const OracleReport &report) {
    json rows = json::array();
    for (const auto &c : report.comparisons) {
        rows.push_back({{"label", c.label},
                        {"steered", c.steered + 1},
                        {"steering_set", one_based(c.steering_set)},
                        {"axis", quadrature_name(c.axis)},
                        {"analytic", c.analytic},
                        {"empirical", c.empirical},
                        {"deviation_sigma", c.deviation_sigma}});
    }
    return {{"sampler", kSamplerId},
            {"comparisons", std::move(rows)},
            {"max_deviation_sigma", report.max_deviation_sigma},
            {"sigma_bound", kOracleSigmaBound},
            {"passed", report.passed}};
}

std::vector<std::string> sweep_csv_header() {
    std::vector<std::string> cols = {"parameter"};
    for (std::size_t m = 1; m <= kCsvModeColumns; ++m) {
        cols.push_back(fmt::format("S2_{}", m));
    }
    for (const char *c : {"regime_count", "full_inseparability", "S_A_B", "S_A_C", "monogamy_product", "S_A_BC",
                          "S_B_A", "S_C_A", "tripartite_value"}) {
        cols.emplace_back(c);
    }
    return cols;
}

void write_sweep_csv(const SweepResult &result, std::ostream &out) {
    out << fmt::format("{}\n", fmt::join(sweep_csv_header(), ","));
    for (const auto &p : result.points) {
        std::vector<std::string> cells = {format_number(p.value)};
        std::vector<std::string> per_mode(kCsvModeColumns);
        for (const auto &e : p.report.entries) {
            if (e.mode < kCsvModeColumns) {
                per_mode[e.mode] = format_number(e.value.steering_number);
            }
        }
        cells.insert(cells.end(), per_mode.begin(), per_mode.end());
        cells.push_back(fmt::format("{}", p.report.regime_count));
        cells.push_back(p.report.full_inseparability ? "1" : "0");
        if (p.monogamy) {
            cells.push_back(format_number(p.monogamy->s_a_b));
            cells.push_back(format_number(p.monogamy->s_a_c));
            cells.push_back(format_number(p.monogamy->product));
        } else {
            cells.insert(cells.end(), 3, "");
        }
        cells.push_back(optional_cell(p.s_a_bc));
        cells.push_back(optional_cell(p.s_b_a));
        cells.push_back(optional_cell(p.s_c_a));
        cells.push_back(p.tripartite ? format_number(p.tripartite->product_of_variances) : "");
        out << fmt::format("{}\n", fmt::join(cells, ","));
    }
}

json sweep_to_json(const SweepResult &result) {
    json rows = json::array();
    for (const auto &p : result.points) {
        json row = {{"value", p.value},
                    {"active_modes", one_based(p.active_modes)},
                    {"steering", steering_report_to_json(p.report)}};
        if (p.monogamy) {
            row["monogamy"] = {{"S_A_B", p.monogamy->s_a_b},
                               {"S_A_C", p.monogamy->s_a_c},
                               {"product", p.monogamy->product},
                               {"holds", p.monogamy->holds}};
        }
        if (p.s_a_bc) {
            row["S_A_BC"] = *p.s_a_bc;
        }
        if (p.s_b_a) {
            row["S_B_A"] = *p.s_b_a;
        }
        if (p.s_c_a) {
            row["S_C_A"] = *p.s_c_a;
        }
        if (p.tripartite) {
            row["tripartite_value"] = p.tripartite->product_of_variances;
        }
        rows.push_back(std::move(row));
    }
    return {{"parameter", result.parameter_name}, {"points", std::move(rows)}};
}

void write_steering_csv(const SteeringReport &report, std::ostream &out) {
    out << "mode,inferred_var_x,inferred_var_p,S,steering_number,steerable\n";
    for (const auto &e : report.entries) {
        out << fmt::format("{},{},{},{},{},{}\n", e.mode + 1, format_number(e.value.inferred_var_x),
                           format_number(e.value.inferred_var_p), format_number(e.value.product),
                           format_number(e.value.steering_number), e.value.steerable ? 1 : 0);
    }
}

}  // namespace cvsteer
