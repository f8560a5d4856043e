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

#include "test_support.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cvsteer::testing {

namespace fs = std::filesystem;

std::vector<NetworkSpec> random_specs(std::size_t count, std::uint64_t base_seed) {
    std::vector<NetworkSpec> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(random_network_spec(base_seed + 7919 * k));
    }
    return out;
}

fs::path fresh_temp_dir(const std::string &tag) {
    fs::path dir = fs::temp_directory_path() / ("cvsteer-test-" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_text(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path &path) { return nlohmann::json::parse(read_text(path)); }

nlohmann::json without_timestamps(nlohmann::json doc) {
    if (doc.is_object()) {
        doc.erase("timestamp");
        for (auto &[key, value] : doc.items()) {
            value = without_timestamps(value);
        }
    } else if (doc.is_array()) {
        for (auto &value : doc) {
            value = without_timestamps(value);
        }
    }
    return doc;
}

}  // namespace cvsteer::testing
