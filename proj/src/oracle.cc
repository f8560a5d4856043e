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

#include "cvsteer/oracle.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "cvsteer/steering.h"

namespace cvsteer {

namespace {

constexpr std::uint32_t kBatchMagic = 0x42535643;  // "CVSB"

double uniform01(std::mt19937_64 &rng) {
    // 53 random bits, shifted into (0, 1] so log() stays finite.
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

void fill_block(RowMajorMatrix &out, const Eigen::MatrixXd &factor, std::uint64_t seed, std::size_t block,
                std::size_t begin, std::size_t end) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    auto dim = factor.rows();
    Eigen::VectorXd z(dim);
    for (std::size_t row = begin; row < end; ++row) {
        for (Eigen::Index k = 0; k < dim; k += 2) {
            double radius = std::sqrt(-2.0 * std::log(uniform01(rng)));
            double angle = 2.0 * std::numbers::pi * uniform01(rng);
            z(k) = radius * std::cos(angle);
            if (k + 1 < dim) {
                z(k + 1) = radius * std::sin(angle);
            }
        }
        out.row(static_cast<Eigen::Index>(row)) = (factor.triangularView<Eigen::Lower>() * z).transpose();
    }
}

template <typename T>
void write_le(std::ostream &out, T value) {
    static_assert(std::endian::native == std::endian::little, "batch export assumes a little-endian host");
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream &in) {
    T value{};
    in.read(reinterpret_cast<char *>(&value), sizeof(T));
    if (!in) {
        throw std::runtime_error("truncated sample batch");
    }
    return value;
}

}  // namespace

SampleBatch sample(const GaussianState &state, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
    if (n_samples < 2) {
        throw std::invalid_argument("sampling needs at least two samples");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(state.cov());
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("covariance has no Cholesky factor (not positive definite)");
    }
    Eigen::MatrixXd factor = llt.matrixL();

    SampleBatch batch;
    batch.n_samples = n_samples;
    batch.seed = seed;
    batch.data.resize(static_cast<Eigen::Index>(n_samples), state.cov().cols());

    std::size_t blocks = (n_samples + kSampleBlock - 1) / kSampleBlock;
    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
            fill_block(batch.data, factor, seed, b, b * kSampleBlock, std::min(n_samples, (b + 1) * kSampleBlock));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return batch;
}

double empirical_inferred_variance(const SampleBatch &batch, std::size_t steered,
                                   std::span<const std::size_t> steering_set, Quadrature axis) {
    std::size_t modes = batch.n_quadratures() / 2;
    if (steered >= modes || steering_set.empty()) {
        throw std::invalid_argument("empirical_inferred_variance: bad steered mode or empty steering set");
    }
    auto n = static_cast<Eigen::Index>(batch.n_samples);
    Eigen::VectorXd target = batch.data.col(static_cast<Eigen::Index>(quadrature_index(steered, axis)));
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(steering_set.size()));
    for (std::size_t i = 0; i < steering_set.size(); ++i) {
        if (steering_set[i] >= modes || steering_set[i] == steered) {
            throw std::invalid_argument("empirical_inferred_variance: bad steering mode");
        }
        design.col(static_cast<Eigen::Index>(i)) =
            batch.data.col(static_cast<Eigen::Index>(quadrature_index(steering_set[i], axis)));
    }
    Eigen::VectorXd coef = design.completeOrthogonalDecomposition().solve(target);
    Eigen::VectorXd residual = target - design * coef;
    return residual.squaredNorm() / static_cast<double>(n);
}

void write_batch(const SampleBatch &batch, std::ostream &out) {
    write_le<std::uint32_t>(out, kBatchMagic);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(batch.n_quadratures()));
    write_le<std::uint64_t>(out, batch.n_samples);
    out.write(reinterpret_cast<const char *>(batch.data.data()),
              static_cast<std::streamsize>(sizeof(double) * batch.data.size()));
    if (!out) {
        throw std::runtime_error("failed to write sample batch");
    }
}

SampleBatch read_batch(std::istream &in) {
    if (read_le<std::uint32_t>(in) != kBatchMagic) {
        throw std::runtime_error("not a sample batch (bad magic)");
    }
    auto cols = read_le<std::uint32_t>(in);
    auto rows = read_le<std::uint64_t>(in);
    SampleBatch batch;
    batch.n_samples = rows;
    batch.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    in.read(reinterpret_cast<char *>(batch.data.data()), static_cast<std::streamsize>(sizeof(double) * rows * cols));
    if (!in) {
        throw std::runtime_error("truncated sample batch");
    }
    return batch;
}

OracleReport verify_network(const BuiltNetwork &network, const std::string &label, std::size_t n_samples,
                            std::uint64_t seed, unsigned threads) {
    // Sampling the active marginal keeps the batch small; inference only touches those rails.
    GaussianState marginal = network.state.marginal(network.active_modes);
    SampleBatch batch = sample(marginal, n_samples, seed, threads);
    std::size_t n = network.active_modes.size();

    OracleReport report;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j) {
                rest.push_back(k);
            }
        }
        for (auto axis : {Quadrature::X, Quadrature::P}) {
            OracleComparison c;
            c.label = label;
            c.steered = network.active_modes[j];
            for (std::size_t k : rest) {
                c.steering_set.push_back(network.active_modes[k]);
            }
            c.axis = axis;
            c.analytic = inferred_variance(marginal, j, rest, axis);
            c.empirical = empirical_inferred_variance(batch, j, rest, axis);
            double sigma = c.analytic * std::sqrt(2.0 / static_cast<double>(n_samples));
            c.deviation_sigma = std::abs(c.empirical - c.analytic) / sigma;
            report.max_deviation_sigma = std::max(report.max_deviation_sigma, c.deviation_sigma);
            report.passed = report.passed && c.deviation_sigma <= kOracleSigmaBound;
            report.comparisons.push_back(std::move(c));
        }
    }
    return report;
}

void merge_into(OracleReport &total, const OracleReport &part) {
    total.comparisons.insert(total.comparisons.end(), part.comparisons.begin(), part.comparisons.end());
    total.max_deviation_sigma = std::max(total.max_deviation_sigma, part.max_deviation_sigma);
    total.passed = total.passed && part.passed;
}

}  // namespace cvsteer
