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

#include "cvsteer/network.h"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include <fmt/format.h>

namespace cvsteer {

namespace {

constexpr std::size_t kChainRails = 8;

struct ChainSlot {
    const char *name;
    std::size_t fresh;
    std::size_t existing;
};

// Fresh vacuum enters the first-named rail; the second-named rail carries the
// field arriving from upstream.
constexpr std::array<ChainSlot, 7> kChain = {{
    {"VBS_12", 0, 1},
    {"VBS_31", 2, 0},
    {"VBS_24", 1, 3},
    {"VBS_53", 4, 2},
    {"VBS_46", 3, 5},
    {"VBS_75", 6, 4},
    {"VBS_68", 5, 7},
}};

// Reflectivities in percent, rows n = 2..8, columns in kChain order.
constexpr std::array<std::array<double, 7>, 7> kChainReflectivities = {{
    {50, 100, 100, 100, 100, 100, 100},
    {51.1, 50, 100, 100, 100, 100, 100},
    {50, 50, 50, 100, 100, 100, 100},
    {50.8, 33.3, 50, 50, 100, 100, 100},
    {50, 33.3, 33.3, 50, 50, 100, 100},
    {50.6, 25, 33.3, 33.3, 50, 50, 100},
    {50, 25, 25, 33.3, 33.3, 50, 50},
}};

// Experimental inputs: the more strongly squeezed source feeds rail 1.
const InputMode kStrongInput = InputMode::squeezed(-4.1, 9.5, Quadrature::P);
const InputMode kWeakInput = InputMode::squeezed(-3.6, 8.9, Quadrature::X);

std::vector<InputMode> chain_inputs() {
    std::vector<InputMode> inputs(kChainRails, InputMode::vacuum());
    inputs[0] = kStrongInput;
    inputs[1] = kWeakInput;
    return inputs;
}

}  // namespace

SpecError::SpecError(std::string pointer, const std::string &message, std::size_t line)
    : std::invalid_argument(line > 0 ? fmt::format("line {}: {}: {}", line, pointer.empty() ? "/" : pointer, message)
                                     : fmt::format("{}: {}", pointer.empty() ? "/" : pointer, message)),
      pointer_(std::move(pointer)),
      detail_(message),
      line_(line) {}

const std::vector<std::string> &chain_splitter_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &slot : kChain) {
            out.emplace_back(slot.name);
        }
        return out;
    }();
    return names;
}

void NetworkSpec::validate() const {
    std::size_t n = inputs.size();
    if (n == 0) {
        throw SpecError("/inputs", "network has no input modes");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < beamsplitters.size(); ++i) {
        const auto &bs = beamsplitters[i];
        std::string where = fmt::format("/beamsplitters/{}", i);
        if (bs.name.empty()) {
            throw SpecError(where + "/name", "empty splitter name");
        }
        if (!names.insert(bs.name).second) {
            throw SpecError(where + "/name", fmt::format("duplicate splitter name '{}'", bs.name));
        }
        if (bs.first >= n || bs.second >= n) {
            throw SpecError(where + "/modes", fmt::format("rail index out of range for {} inputs", n));
        }
        if (bs.first == bs.second) {
            throw SpecError(where + "/modes", "a splitter needs two distinct rails");
        }
        if (!(bs.reflectivity_percent >= 0.0 && bs.reflectivity_percent <= 100.0)) {
            throw SpecError(where + "/reflectivity_percent",
                            fmt::format("{} outside [0, 100]", bs.reflectivity_percent));
        }
    }
    for (std::size_t i = 0; i < losses.size(); ++i) {
        const auto &loss = losses[i];
        std::string where = fmt::format("/losses/{}", i);
        if (loss.mode >= n) {
            throw SpecError(where + "/mode", fmt::format("rail index out of range for {} inputs", n));
        }
        if (!(loss.transmission >= 0.0 && loss.transmission <= 1.0)) {
            throw SpecError(where + "/transmission", fmt::format("{} outside [0, 1]", loss.transmission));
        }
        if (!loss.after.empty() && names.count(loss.after) == 0) {
            throw SpecError(where + "/after", fmt::format("no splitter named '{}'", loss.after));
        }
    }
    if (!efficiencies.empty()) {
        if (efficiencies.size() != n) {
            throw SpecError("/efficiencies",
                            fmt::format("expected {} entries (one per rail), got {}", n, efficiencies.size()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(efficiencies[i] >= 0.0 && efficiencies[i] <= 1.0)) {
                throw SpecError(fmt::format("/efficiencies/{}", i), fmt::format("{} outside [0, 1]", efficiencies[i]));
            }
        }
    }
    if (active_modes) {
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < active_modes->size(); ++i) {
            std::size_t m = (*active_modes)[i];
            if (m >= n) {
                throw SpecError(fmt::format("/active_modes/{}", i), fmt::format("rail index out of range for {} inputs", n));
            }
            if (!seen.insert(m).second) {
                throw SpecError(fmt::format("/active_modes/{}", i), "rail listed twice");
            }
        }
        if (active_modes->size() < 2) {
            throw SpecError("/active_modes", "at least two rails are needed for steering analysis");
        }
    }
    if (asymmetric_loss_arm >= n) {
        throw SpecError("/asymmetric_loss_arm", "rail index out of range");
    }
}

const BeamSplitter *NetworkSpec::find_beamsplitter(const std::string &name) const {
    auto it = std::find_if(beamsplitters.begin(), beamsplitters.end(),
                           [&](const BeamSplitter &bs) { return bs.name == name; });
    return it == beamsplitters.end() ? nullptr : &*it;
}

BeamSplitter &NetworkSpec::beamsplitter(const std::string &name) {
    auto it = std::find_if(beamsplitters.begin(), beamsplitters.end(),
                           [&](const BeamSplitter &bs) { return bs.name == name; });
    if (it == beamsplitters.end()) {
        throw std::invalid_argument(fmt::format("network has no splitter named '{}'", name));
    }
    return *it;
}

NetworkSpec chain_preset(int n) {
    if (n < kMinPresetModes || n > kMaxPresetModes) {
        throw std::invalid_argument(fmt::format("preset size {} outside [{}, {}]", n, kMinPresetModes, kMaxPresetModes));
    }
    NetworkSpec spec;
    spec.inputs = chain_inputs();
    const auto &row = kChainReflectivities[static_cast<std::size_t>(n - kMinPresetModes)];
    for (std::size_t k = 0; k < kChain.size(); ++k) {
        spec.beamsplitters.push_back({kChain[k].name, kChain[k].fresh, kChain[k].existing, row[k]});
    }
    spec.asymmetric_loss_arm = 0;
    return spec;
}

NetworkSpec preset_by_id(const std::string &id) {
    if (id.size() == 2 && (id[0] == 'n' || id[0] == 'N') && id[1] >= '0' && id[1] <= '9') {
        int n = id[1] - '0';
        if (n >= kMinPresetModes && n <= kMaxPresetModes) {
            return chain_preset(n);
        }
    }
    throw std::invalid_argument(fmt::format("unknown preset '{}', expected n2..n8", id));
}

std::vector<std::size_t> derive_active_modes(const NetworkSpec &spec) {
    std::size_t n = spec.num_modes();
    // Bit k: field depends on squeezed input k.
    std::vector<std::uint64_t> deps(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.inputs[i].kind == InputMode::Kind::Squeezed) {
            deps[i] = std::uint64_t{1} << std::min<std::size_t>(i, 62);
        }
    }
    auto clear_after = [&](const std::string &after) {
        for (const auto &loss : spec.losses) {
            if (loss.after == after && loss.transmission == 0.0) {
                deps[loss.mode] = 0;
            }
        }
    };
    for (const auto &bs : spec.beamsplitters) {
        if (bs.reflectivity_percent == 0.0) {
            std::swap(deps[bs.first], deps[bs.second]);
        } else if (bs.reflectivity_percent < 100.0) {
            std::uint64_t merged = deps[bs.first] | deps[bs.second];
            deps[bs.first] = merged;
            deps[bs.second] = merged;
        }
        clear_after(bs.name);
    }
    clear_after("");
    for (std::size_t i = 0; i < spec.efficiencies.size(); ++i) {
        if (spec.efficiencies[i] == 0.0) {
            deps[i] = 0;
        }
    }
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        if (deps[i] != 0) {
            active.push_back(i);
        }
    }
    if (active.size() < 2) {
        active.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            active[i] = i;
        }
    }
    return active;
}

BuiltNetwork build(const NetworkSpec &spec) {
    spec.validate();
    auto make_input = [](const InputMode &in) {
        return in.kind == InputMode::Kind::Squeezed
                   ? GaussianState::squeezed(in.var_sq_dB, in.var_anti_dB, in.squeezed_axis)
                   : GaussianState::vacuum(1);
    };
    GaussianState state = make_input(spec.inputs.front());
    for (std::size_t i = 1; i < spec.inputs.size(); ++i) {
        state = tensor(state, make_input(spec.inputs[i]));
    }
    auto apply_losses_after = [&](const std::string &after) {
        for (const auto &loss : spec.losses) {
            if (loss.after == after) {
                state = apply_loss(state, loss.mode, loss.transmission);
            }
        }
    };
    for (const auto &bs : spec.beamsplitters) {
        state = apply_beamsplitter(state, bs.first, bs.second, bs.reflectivity());
        // The transform hands rail `first` the fraction R of rail `second`;
        // relabel so each rail keeps its reflected share.
        state = swap_modes(state, bs.first, bs.second);
        apply_losses_after(bs.name);
    }
    apply_losses_after("");
    for (std::size_t i = 0; i < spec.efficiencies.size(); ++i) {
        if (spec.efficiencies[i] != 1.0) {
            state = apply_loss(state, i, spec.efficiencies[i]);
        }
    }
    std::vector<std::size_t> active = spec.active_modes ? *spec.active_modes : derive_active_modes(spec);
    return {std::move(state), std::move(active)};
}

NetworkSpec inject_asymmetric_loss(const NetworkSpec &spec, double loss_fraction) {
    if (!(loss_fraction >= 0.0 && loss_fraction <= 1.0)) {
        throw std::invalid_argument(fmt::format("loss fraction {} outside [0, 1]", loss_fraction));
    }
    if (spec.find_beamsplitter("VBS_12") == nullptr) {
        throw std::invalid_argument("asymmetric loss needs a splitter named VBS_12");
    }
    NetworkSpec out = spec;
    out.losses.push_back({spec.asymmetric_loss_arm, 1.0 - loss_fraction, "VBS_12"});
    return out;
}

NetworkSpec with_reflectivity(const NetworkSpec &spec, const std::string &name, double reflectivity_percent) {
    if (!(reflectivity_percent >= 0.0 && reflectivity_percent <= 100.0)) {
        throw std::invalid_argument(fmt::format("reflectivity {}% outside [0, 100]", reflectivity_percent));
    }
    NetworkSpec out = spec;
    out.beamsplitter(name).reflectivity_percent = reflectivity_percent;
    return out;
}

NetworkSpec with_symmetric_pure_inputs(const NetworkSpec &spec, double squeezing_dB) {
    NetworkSpec out = spec;
    int seen = 0;
    for (auto &in : out.inputs) {
        if (in.kind == InputMode::Kind::Squeezed) {
            in = InputMode::squeezed(-squeezing_dB, squeezing_dB, seen % 2 == 0 ? Quadrature::P : Quadrature::X);
            ++seen;
        }
    }
    return out;
}

NetworkSpec random_network_spec(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto coin = [&](double p) { return uniform(0.0, 1.0) < p; };

    NetworkSpec spec;
    spec.inputs.assign(kChainRails, InputMode::vacuum());
    for (std::size_t i = 0; i < 2; ++i) {
        double sq = uniform(-9.0, -1.0);
        double anti = -sq + uniform(0.0, 6.0);
        spec.inputs[i] = InputMode::squeezed(sq, anti, coin(0.5) ? Quadrature::P : Quadrature::X);
    }
    for (const auto &slot : kChain) {
        double r = uniform(0.0, 100.0);
        if (coin(0.2)) {
            r = 100.0;
        } else if (coin(0.05)) {
            r = 0.0;
        }
        spec.beamsplitters.push_back({slot.name, slot.fresh, slot.existing, r});
    }
    auto extra = static_cast<int>(rng() % 4);
    for (int e = 0; e < extra; ++e) {
        std::size_t a = rng() % kChainRails;
        std::size_t b = (a + 1 + rng() % (kChainRails - 1)) % kChainRails;
        spec.beamsplitters.push_back({fmt::format("X{}", e + 1), a, b, uniform(0.0, 100.0)});
    }
    if (coin(0.5)) {
        spec.losses.push_back({rng() % 2, uniform(0.2, 1.0), "VBS_12"});
    }
    auto tail_losses = static_cast<int>(rng() % 3);
    for (int l = 0; l < tail_losses; ++l) {
        spec.losses.push_back({rng() % kChainRails, uniform(0.3, 1.0), ""});
    }
    if (coin(0.5)) {
        for (std::size_t i = 0; i < kChainRails; ++i) {
            spec.efficiencies.push_back(uniform(0.9, 1.0));
        }
    }
    return spec;
}

}  // namespace cvsteer
