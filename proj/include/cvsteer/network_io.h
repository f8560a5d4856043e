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

#ifndef CVSTEER_NETWORK_IO_H
#define CVSTEER_NETWORK_IO_H

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cvsteer/network.h"

namespace cvsteer {

// Network files are JSON with top-level keys inputs, beamsplitters, losses,
// efficiencies, active_modes (and optionally asymmetric_loss_arm). Rail
// indices are 1-based in files, reflectivities in percent, transmissions as
// fractions. schemas/network_spec.schema.json documents the layout.

/// Parses and validates; SpecError carries the line of the offending field.
NetworkSpec parse_network_spec(std::string_view text);
NetworkSpec network_spec_from_json(const nlohmann::json &doc);
nlohmann::json network_spec_to_json(const NetworkSpec &spec);

NetworkSpec load_network_spec(const std::filesystem::path &path);
void save_network_spec(const NetworkSpec &spec, const std::filesystem::path &path);

/// 1-based line of the value addressed by a JSON pointer in `text`, or 0 if
/// the pointer does not resolve.
std::size_t locate_json_pointer(std::string_view text, const std::string &pointer);

}  // namespace cvsteer

#endif
