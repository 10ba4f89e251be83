// Copyright 2026 The qdisco Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qdisco/compiler.hpp"
#include "qdisco/hardware.hpp"
#include "qdisco/optimizer.hpp"
#include "qdisco/problem.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {

/// Stable 64-bit fingerprint of a polynomial's canonical form.
std::uint64_t problem_hash(const SpinPolynomial& poly);

/// Fraction of shots landing on a minimizer of the cost.
double accuracy(const ShotCounts& counts, const Optimum& optimum);
double accuracy(const ShotCounts& counts, const SpinPolynomial& poly);

/// Sorted accuracies of noiseless runs; its empirical CDF is the scoring function.
class ReferenceDistribution {
   public:
    ReferenceDistribution(std::uint64_t problem_hash, int layers, std::vector<double> samples);

    std::uint64_t problem_hash() const noexcept { return hash_; }
    int layers() const noexcept { return layers_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    int size() const noexcept { return static_cast<int>(samples_.size()); }

    /// (#samples < x + #samples == x / 2) / M_ref.
    double cdf(double x) const;

    bool operator==(const ReferenceDistribution&) const = default;

   private:
    std::uint64_t hash_;
    int layers_;
    std::vector<double> samples_;
};

inline constexpr int kMinReferenceSize = 100;

struct ReferenceOptions {
    int layers = 1;
    OptimizerConfig optimizer;
    int m_ref = 500;
    std::int64_t shots = 1024;
};

/// m_ref optimize-then-sample noiseless runs with distinct derived seeds.
ReferenceDistribution build_reference(const SpinPolynomial& poly, const ReferenceOptions& opts, std::uint64_t seed);

double score(double x, const ReferenceDistribution& ref);

struct HScoreReport {
    std::vector<double> accuracies;
    std::vector<double> scores;
    double c = 0.0;
    int m = 0;
    int m_ref = 0;
    int layers = 0;
    std::uint64_t problem_hash = 0;

    bool operator==(const HScoreReport&) const = default;
};

/// C = (2 / M) sum F(X_i).
HScoreReport h_score(std::span<const double> accuracies, const ReferenceDistribution& ref);

struct BenchmarkOptions {
    ReferenceOptions reference;
    int m = 500;
    double eta = 1.0;
    int trajectories = 64;
};

/// Scores a QPU: its best region at eta hosts m noisy sampling runs of the
/// noiselessly optimized circuit, scored against a freshly built reference.
HScoreReport benchmark_qpu(const SpinPolynomial& poly, const QpuModel& qpu, const BenchmarkOptions& opts,
                           std::uint64_t seed);

}  // namespace qdisco
