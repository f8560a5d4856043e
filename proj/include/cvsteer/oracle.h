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

#ifndef CVSTEER_ORACLE_H
#define CVSTEER_ORACLE_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvsteer/gaussian.h"
#include "cvsteer/network.h"

namespace cvsteer {

/// Identifies the sampling scheme; bump when draws would change.
inline constexpr const char *kSamplerId = "mt19937_64-boxmuller-v1";
inline constexpr std::size_t kSampleBlock = 65536;

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Quadrature draws, one row per sample, columns in the state's mode-major order.
struct SampleBatch {
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    RowMajorMatrix data;

    std::size_t n_quadratures() const { return static_cast<std::size_t>(data.cols()); }
};

/// Draws L z with L the unpivoted Cholesky factor of the covariance and z
/// standard normal. Block b of kSampleBlock rows uses its own generator
/// seeded from (seed, b), so output does not depend on `threads`.
SampleBatch sample(const GaussianState &state, std::size_t n_samples, std::uint64_t seed, unsigned threads = 1);

/// Residual variance of the least-squares regression of q_j on {q_k : k in K},
/// computed from the samples directly (no intercept: states are zero-mean).
double empirical_inferred_variance(const SampleBatch &batch, std::size_t steered,
                                   std::span<const std::size_t> steering_set, Quadrature axis);

/// Little-endian: 16-byte header {u32 magic "CVSB", u32 n_quadratures,
/// u64 n_samples} followed by row-major float64 data.
void write_batch(const SampleBatch &batch, std::ostream &out);
SampleBatch read_batch(std::istream &in);

struct OracleComparison {
    std::string label;
    std::size_t steered = 0;
    std::vector<std::size_t> steering_set;
    Quadrature axis = Quadrature::X;
    double analytic = 0.0;
    double empirical = 0.0;
    /// |empirical - analytic| / (analytic sqrt(2/n)).
    double deviation_sigma = 0.0;
};

struct OracleReport {
    std::vector<OracleComparison> comparisons;
    double max_deviation_sigma = 0.0;
    bool passed = true;
};

inline constexpr double kOracleSigmaBound = 4.0;

/// Compares every analytic inferred variance of a built network (each active
/// mode steered by the rest, both axes) against the sampled regression.
OracleReport verify_network(const BuiltNetwork &network, const std::string &label, std::size_t n_samples,
                            std::uint64_t seed, unsigned threads = 1);

void merge_into(OracleReport &total, const OracleReport &part);

}  // namespace cvsteer

#endif
