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

#include "cvsteer/network_io.h"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace cvsteer {

namespace {

using nlohmann::json;

const json &require(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SpecError(where, fmt::format("missing required key '{}'", key));
    }
    return *it;
}

double as_number(const json &v, const std::string &where) {
    if (!v.is_number()) {
        throw SpecError(where, fmt::format("expected a number, got {}", v.type_name()));
    }
    return v.get<double>();
}

std::size_t as_rail(const json &v, const std::string &where) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw SpecError(where, "expected a 1-based rail index");
    }
    return static_cast<std::size_t>(v.get<long long>() - 1);
}

const json &as_array(const json &v, const std::string &where) {
    if (!v.is_array()) {
        throw SpecError(where, fmt::format("expected an array, got {}", v.type_name()));
    }
    return v;
}

void reject_unknown_keys(const json &obj, std::initializer_list<const char *> allowed, const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *key : allowed) {
            ok = ok || it.key() == key;
        }
        if (!ok) {
            throw SpecError(where + "/" + it.key(), "unknown key");
        }
    }
}

InputMode parse_input(const json &v, const std::string &where) {
    if (!v.is_object()) {
        throw SpecError(where, "expected an object");
    }
    reject_unknown_keys(v, {"kind", "var_sq_dB", "var_anti_dB", "squeezed_axis"}, where);
    const json &kind = require(v, "kind", where);
    if (kind == "vacuum") {
        return InputMode::vacuum();
    }
    if (kind != "squeezed") {
        throw SpecError(where + "/kind", "expected \"squeezed\" or \"vacuum\"");
    }
    InputMode in;
    in.kind = InputMode::Kind::Squeezed;
    in.var_sq_dB = as_number(require(v, "var_sq_dB", where), where + "/var_sq_dB");
    in.var_anti_dB = as_number(require(v, "var_anti_dB", where), where + "/var_anti_dB");
    const json &axis = require(v, "squeezed_axis", where);
    if (axis != "x" && axis != "p") {
        throw SpecError(where + "/squeezed_axis", "expected \"x\" or \"p\"");
    }
    in.squeezed_axis = parse_quadrature(axis.get<std::string>());
    return in;
}

// Minimal tokenizer that walks the raw text to find where a pointer lands.
class PointerLocator {
   public:
    explicit PointerLocator(std::string_view text) : text_(text) {}

    std::size_t find(const std::vector<std::string> &path) {
        try {
            return walk(path, 0);
        } catch (const std::runtime_error &) {
            return 0;
        }
    }

   private:
    std::size_t walk(const std::vector<std::string> &path, std::size_t depth) {
        skip_ws();
        if (depth == path.size()) {
            return line_;
        }
        char c = peek();
        if (c == '{') {
            ++pos_;
            while (true) {
                skip_ws();
                if (peek() == '}') {
                    throw std::runtime_error("key not found");
                }
                std::string key = read_string();
                skip_ws();
                expect(':');
                if (key == path[depth]) {
                    return walk(path, depth + 1);
                }
                skip_value();
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                }
            }
        }
        if (c == '[') {
            ++pos_;
            std::size_t target = std::stoul(path[depth]);
            for (std::size_t i = 0;; ++i) {
                skip_ws();
                if (peek() == ']') {
                    throw std::runtime_error("index not found");
                }
                if (i == target) {
                    return walk(path, depth + 1);
                }
                skip_value();
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                }
            }
        }
        throw std::runtime_error("pointer descends into a scalar");
    }

    void skip_value() {
        skip_ws();
        char c = peek();
        if (c == '"') {
            read_string();
        } else if (c == '{' || c == '[') {
            char close = c == '{' ? '}' : ']';
            ++pos_;
            while (true) {
                skip_ws();
                if (peek() == close) {
                    ++pos_;
                    return;
                }
                if (c == '{') {
                    read_string();
                    skip_ws();
                    expect(':');
                }
                skip_value();
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                }
            }
        } else {
            while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']' &&
                   !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }
    }

    std::string read_string() {
        expect('"');
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') {
                ++pos_;
            }
            if (pos_ < text_.size()) {
                out.push_back(text_[pos_++]);
            }
        }
        expect('"');
        return out;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') {
                ++line_;
            }
            ++pos_;
        }
    }

    char peek() const {
        if (pos_ >= text_.size()) {
            throw std::runtime_error("unexpected end");
        }
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) {
            throw std::runtime_error("unexpected character");
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::vector<std::string> split_pointer(const std::string &pointer) {
    std::vector<std::string> out;
    std::size_t start = 1;
    while (start <= pointer.size() && !pointer.empty()) {
        std::size_t end = pointer.find('/', start);
        if (end == std::string::npos) {
            end = pointer.size();
        }
        out.push_back(pointer.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace

std::size_t locate_json_pointer(std::string_view text, const std::string &pointer) {
    return PointerLocator(text).find(split_pointer(pointer));
}

NetworkSpec network_spec_from_json(const json &doc) {
    if (!doc.is_object()) {
        throw SpecError("", "network spec must be a JSON object");
    }
    reject_unknown_keys(doc, {"inputs", "beamsplitters", "losses", "efficiencies", "active_modes", "asymmetric_loss_arm"},
                        "");
    NetworkSpec spec;
    const json &inputs = as_array(require(doc, "inputs", ""), "/inputs");
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        spec.inputs.push_back(parse_input(inputs[i], fmt::format("/inputs/{}", i)));
    }
    const json &splitters = as_array(require(doc, "beamsplitters", ""), "/beamsplitters");
    for (std::size_t i = 0; i < splitters.size(); ++i) {
        std::string where = fmt::format("/beamsplitters/{}", i);
        const json &v = splitters[i];
        if (!v.is_object()) {
            throw SpecError(where, "expected an object");
        }
        reject_unknown_keys(v, {"name", "modes", "reflectivity_percent"}, where);
        BeamSplitter bs;
        const json &name = require(v, "name", where);
        if (!name.is_string()) {
            throw SpecError(where + "/name", "expected a string");
        }
        bs.name = name.get<std::string>();
        const json &modes = as_array(require(v, "modes", where), where + "/modes");
        if (modes.size() != 2) {
            throw SpecError(where + "/modes", "expected exactly two rails");
        }
        bs.first = as_rail(modes[0], where + "/modes/0");
        bs.second = as_rail(modes[1], where + "/modes/1");
        bs.reflectivity_percent = as_number(require(v, "reflectivity_percent", where), where + "/reflectivity_percent");
        spec.beamsplitters.push_back(std::move(bs));
    }
    if (auto it = doc.find("losses"); it != doc.end()) {
        const json &losses = as_array(*it, "/losses");
        for (std::size_t i = 0; i < losses.size(); ++i) {
            std::string where = fmt::format("/losses/{}", i);
            const json &v = losses[i];
            if (!v.is_object()) {
                throw SpecError(where, "expected an object");
            }
            reject_unknown_keys(v, {"mode", "transmission", "after"}, where);
            LossChannel loss;
            loss.mode = as_rail(require(v, "mode", where), where + "/mode");
            loss.transmission = as_number(require(v, "transmission", where), where + "/transmission");
            if (auto after = v.find("after"); after != v.end()) {
                if (!after->is_string()) {
                    throw SpecError(where + "/after", "expected a splitter name");
                }
                loss.after = after->get<std::string>();
            }
            spec.losses.push_back(std::move(loss));
        }
    }
    if (auto it = doc.find("efficiencies"); it != doc.end()) {
        const json &eff = as_array(*it, "/efficiencies");
        for (std::size_t i = 0; i < eff.size(); ++i) {
            spec.efficiencies.push_back(as_number(eff[i], fmt::format("/efficiencies/{}", i)));
        }
    }
    if (auto it = doc.find("active_modes"); it != doc.end()) {
        const json &act = as_array(*it, "/active_modes");
        std::vector<std::size_t> modes;
        for (std::size_t i = 0; i < act.size(); ++i) {
            modes.push_back(as_rail(act[i], fmt::format("/active_modes/{}", i)));
        }
        spec.active_modes = std::move(modes);
    }
    if (auto it = doc.find("asymmetric_loss_arm"); it != doc.end()) {
        spec.asymmetric_loss_arm = as_rail(*it, "/asymmetric_loss_arm");
    }
    spec.validate();
    return spec;
}

NetworkSpec parse_network_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::size_t line = 1;
        std::size_t limit = std::min(e.byte, text.size());
        for (std::size_t i = 0; i + 1 < limit; ++i) {
            line += text[i] == '\n' ? 1 : 0;
        }
        throw SpecError("", fmt::format("malformed JSON: {}", e.what()), line);
    }
    try {
        return network_spec_from_json(doc);
    } catch (const SpecError &e) {
        std::size_t line = locate_json_pointer(text, e.pointer());
        // Missing keys resolve to their parent object.
        if (line == 0 && !e.pointer().empty()) {
            line = locate_json_pointer(text, e.pointer().substr(0, e.pointer().rfind('/')));
        }
        throw SpecError(e.pointer(), e.detail(), line);
    }
}

json network_spec_to_json(const NetworkSpec &spec) {
    json doc;
    doc["inputs"] = json::array();
    for (const auto &in : spec.inputs) {
        if (in.kind == InputMode::Kind::Vacuum) {
            doc["inputs"].push_back({{"kind", "vacuum"}});
        } else {
            doc["inputs"].push_back({{"kind", "squeezed"},
                                     {"var_sq_dB", in.var_sq_dB},
                                     {"var_anti_dB", in.var_anti_dB},
                                     {"squeezed_axis", quadrature_name(in.squeezed_axis)}});
        }
    }
    doc["beamsplitters"] = json::array();
    for (const auto &bs : spec.beamsplitters) {
        doc["beamsplitters"].push_back({{"name", bs.name},
                                        {"modes", {bs.first + 1, bs.second + 1}},
                                        {"reflectivity_percent", bs.reflectivity_percent}});
    }
    doc["losses"] = json::array();
    for (const auto &loss : spec.losses) {
        json l = {{"mode", loss.mode + 1}, {"transmission", loss.transmission}};
        if (!loss.after.empty()) {
            l["after"] = loss.after;
        }
        doc["losses"].push_back(std::move(l));
    }
    doc["efficiencies"] = spec.efficiencies;
    if (spec.active_modes) {
        json act = json::array();
        for (std::size_t m : *spec.active_modes) {
            act.push_back(m + 1);
        }
        doc["active_modes"] = std::move(act);
    }
    doc["asymmetric_loss_arm"] = spec.asymmetric_loss_arm + 1;
    return doc;
}

NetworkSpec load_network_spec(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecError("", fmt::format("cannot open spec file '{}'", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_network_spec(buffer.str());
}

void save_network_spec(const NetworkSpec &spec, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    out << network_spec_to_json(spec).dump(2) << '\n';
}

}  // namespace cvsteer
