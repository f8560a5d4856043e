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

#ifndef CVSTEER_NETWORK_H
#define CVSTEER_NETWORK_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvsteer/gaussian.h"

namespace cvsteer {

/// Raised by NetworkSpec validation and spec-file parsing. `pointer` is the
/// JSON pointer of the offending field (array indices 0-based) when known;
/// `line` is its 1-based line in the source text when known.
class SpecError : public std::invalid_argument {
   public:
    SpecError(std::string pointer, const std::string &message, std::size_t line = 0);

    const std::string &pointer() const { return pointer_; }
    std::size_t line() const { return line_; }
    const std::string &detail() const { return detail_; }

   private:
    std::string pointer_;
    std::string detail_;
    std::size_t line_;
};

struct InputMode {
    enum class Kind { Squeezed, Vacuum };
    Kind kind = Kind::Vacuum;
    double var_sq_dB = 0.0;
    double var_anti_dB = 0.0;
    Quadrature squeezed_axis = Quadrature::P;

    static InputMode vacuum() { return {}; }
    static InputMode squeezed(double sq_dB, double anti_dB, Quadrature axis) {
        return {Kind::Squeezed, sq_dB, anti_dB, axis};
    }
    bool operator==(const InputMode &) const = default;
};

/// A splitter mixing rails `first` and `second` (0-based). Each rail keeps the
/// fraction R = reflectivity_percent / 100 of its own field and receives 1 - R
/// of the other, so R = 100 is a mirror that leaves both rails in place.
struct BeamSplitter {
    std::string name;
    std::size_t first = 0;
    std::size_t second = 0;
    double reflectivity_percent = 100.0;

    double reflectivity() const { return reflectivity_percent / 100.0; }
    bool operator==(const BeamSplitter &) const = default;
};

struct LossChannel {
    std::size_t mode = 0;
    double transmission = 1.0;
    /// Splitter after which the loss acts; empty means after the whole network.
    std::string after;
    bool operator==(const LossChannel &) const = default;
};

struct NetworkSpec {
    std::vector<InputMode> inputs;
    std::vector<BeamSplitter> beamsplitters;
    std::vector<LossChannel> losses;
    /// Per-rail detection transmissions, applied last; empty means ideal.
    std::vector<double> efficiencies;
    /// Rails retained for analysis; derived from the wiring when absent.
    std::optional<std::vector<std::size_t>> active_modes;
    /// Rail that receives injected asymmetric loss.
    std::size_t asymmetric_loss_arm = 0;

    std::size_t num_modes() const { return inputs.size(); }

    /// Throws SpecError naming the offending field.
    void validate() const;

    const BeamSplitter *find_beamsplitter(const std::string &name) const;
    BeamSplitter &beamsplitter(const std::string &name);

    bool operator==(const NetworkSpec &) const = default;
};

struct BuiltNetwork {
    GaussianState state;
    std::vector<std::size_t> active_modes;
};

inline constexpr int kMinPresetModes = 2;
inline constexpr int kMaxPresetModes = 8;

/// Names of the seven chain splitters in application order.
const std::vector<std::string> &chain_splitter_names();

/// The eight-rail chain with two squeezed inputs and the optimised
/// reflectivities for an n-qumode state, n in [2, 8].
NetworkSpec chain_preset(int n);

/// Parses "n2".."n8".
NetworkSpec preset_by_id(const std::string &id);

/// Inputs tensored in order, splitters applied in list order (losses tagged
/// `after` a splitter act right after it), untagged losses next, efficiencies last.
BuiltNetwork build(const NetworkSpec &spec);

/// Rails whose field depends on a squeezed input.
std::vector<std::size_t> derive_active_modes(const NetworkSpec &spec);

/// Adds a loss of the given fraction on spec.asymmetric_loss_arm directly after VBS_12.
NetworkSpec inject_asymmetric_loss(const NetworkSpec &spec, double loss_fraction);

/// Copy of spec with one splitter's reflectivity replaced.
NetworkSpec with_reflectivity(const NetworkSpec &spec, const std::string &name, double reflectivity_percent);

/// Replaces both squeezed inputs with pure symmetric squeezing of the given
/// level (first input squeezed in p, second in x).
NetworkSpec with_symmetric_pure_inputs(const NetworkSpec &spec, double squeezing_dB);

/// Random eight-rail network: random squeezing, chain reflectivities, extra
/// splitters between random rail pairs, losses and efficiencies.
NetworkSpec random_network_spec(std::uint64_t seed);

}  // namespace cvsteer

#endif
