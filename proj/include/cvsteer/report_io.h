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

#ifndef CVSTEER_REPORT_IO_H
#define CVSTEER_REPORT_IO_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvsteer/optimizer.h"
#include "cvsteer/oracle.h"
#include "cvsteer/steering.h"

namespace cvsteer {

/// Provenance attached to every output file.
struct RunManifest {
    std::string command;
    /// "preset:n3" or "spec:<path>".
    std::string source;
    std::map<std::string, std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    std::string tool_version;
    std::string timestamp;
};

nlohmann::json manifest_to_json(const RunManifest &manifest);

/// Mode indices are written 1-based.
nlohmann::json steering_report_to_json(const SteeringReport &report);
nlohmann::json tripartite_to_json(const TripartiteVerdict &verdict, const std::array<std::size_t, 3> &modes);
nlohmann::json optimum_to_json(const ReflectivityOptimum &optimum);
nlohmann::json regime_scan_to_json(const RegimeScan &scan);
nlohmann::json oracle_report_to_json(const OracleReport &report);

inline constexpr std::size_t kCsvModeColumns = 8;

/// Column names shared by every sweep CSV.
std::vector<std::string> sweep_csv_header();
void write_sweep_csv(const SweepResult &result, std::ostream &out);
nlohmann::json sweep_to_json(const SweepResult &result);

/// Steering report as a one-row-per-mode CSV.
void write_steering_csv(const SteeringReport &report, std::ostream &out);

/// Round-trip decimal formatting used in CSV cells.
std::string format_number(double value);

}  // namespace cvsteer

#endif
