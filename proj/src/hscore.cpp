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

#include "qdisco/hscore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "qdisco/errors.hpp"
#include "qdisco/random.hpp"

namespace qdisco {

std::uint64_t problem_hash(const SpinPolynomial& poly) {
    // FNV-1a over (n, offset, then weight and support of each term).
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    feed(static_cast<std::uint64_t>(poly.num_spins()));
    feed(std::bit_cast<std::uint64_t>(poly.constant_offset()));
    for (const auto& t : poly.terms()) {
        feed(std::bit_cast<std::uint64_t>(t.weight));
        feed(t.support.size());
        for (int i : t.support) feed(static_cast<std::uint64_t>(i));
    }
    return h;
}

double accuracy(const ShotCounts& counts, const Optimum& optimum) {
    if (counts.empty()) throw RangeError("accuracy of an empty histogram");
    std::int64_t hits = 0;
    for (BasisIndex b : optimum.argmins) hits += counts.count(b);
    return static_cast<double>(hits) / static_cast<double>(counts.total());
}

double accuracy(const ShotCounts& counts, const SpinPolynomial& poly) {
    if (counts.num_qubits() != poly.num_spins()) throw DimensionError("histogram width differs from the problem");
    return accuracy(counts, brute_force_optimum(poly));
}

ReferenceDistribution::ReferenceDistribution(std::uint64_t problem_hash, int layers, std::vector<double> samples)
    : hash_(problem_hash), layers_(layers), samples_(std::move(samples)) {
    if (static_cast<int>(samples_.size()) < kMinReferenceSize) {
        throw InvalidSizeError("reference needs at least " + std::to_string(kMinReferenceSize) + " samples, got " +
                               std::to_string(samples_.size()));
    }
    for (double x : samples_) {
        if (!(x >= 0.0 && x <= 1.0)) throw RangeError("reference accuracy outside [0, 1]");
    }
    std::sort(samples_.begin(), samples_.end());
}

double ReferenceDistribution::cdf(double x) const {
    const auto lo = std::lower_bound(samples_.begin(), samples_.end(), x);
    const auto hi = std::upper_bound(lo, samples_.end(), x);
    const double below = static_cast<double>(lo - samples_.begin());
    const double equal = static_cast<double>(hi - lo);
    return (below + 0.5 * equal) / static_cast<double>(samples_.size());
}

namespace {

// The optimized angles only depend on the seed when Nelder-Mead starts from a random point.
bool seed_dependent(const OptimizerConfig& cfg) {
    return !cfg.initial && cfg.method == OptimizerMethod::nelder_mead;
}

QaoaParams optimized_angles(const SpinPolynomial& poly, int layers, OptimizerConfig cfg, std::uint64_t seed) {
    cfg.seed = seed;
    const auto trace = optimize(poly, layers, cfg);
    if (!trace.ok()) throw Error("angle optimization failed: " + *trace.error);
    return trace.best_params;
}

}  // namespace

ReferenceDistribution build_reference(const SpinPolynomial& poly, const ReferenceOptions& opts, std::uint64_t seed) {
    if (opts.m_ref < kMinReferenceSize) {
        throw InvalidSizeError("m_ref must be at least " + std::to_string(kMinReferenceSize));
    }
    if (opts.shots < 1) throw RangeError("shots must be positive");
    const Optimum optimum = brute_force_optimum(poly);
    const QaoaObjective objective(poly);
    std::optional<Eigen::VectorXd> shared;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(opts.m_ref));
    for (int i = 0; i < opts.m_ref; ++i) {
        const std::uint64_t run_seed = derive_seed(seed, streams::kReference, static_cast<std::uint64_t>(i));
        Eigen::VectorXd probs;
        if (seed_dependent(opts.optimizer)) {
            probs = objective.state(optimized_angles(poly, opts.layers, opts.optimizer, run_seed)).probabilities();
        } else {
            if (!shared) shared = objective.state(optimized_angles(poly, opts.layers, opts.optimizer, seed)).probabilities();
            probs = *shared;
        }
        const auto counts = sample_probabilities(probs, poly.num_spins(), opts.shots, derive_seed(run_seed, streams::kSample));
        samples.push_back(accuracy(counts, optimum));
    }
    return ReferenceDistribution(problem_hash(poly), opts.layers, std::move(samples));
}

double score(double x, const ReferenceDistribution& ref) {
    if (!(x >= 0.0 && x <= 1.0)) throw RangeError("accuracy must lie in [0, 1]");
    return ref.cdf(x);
}

HScoreReport h_score(std::span<const double> accuracies, const ReferenceDistribution& ref) {
    if (accuracies.empty()) throw InvalidSizeError("h_score needs at least one accuracy");
    HScoreReport report;
    report.accuracies.assign(accuracies.begin(), accuracies.end());
    report.scores.reserve(accuracies.size());
    double sum = 0.0;
    for (double x : accuracies) {
        report.scores.push_back(score(x, ref));
        sum += report.scores.back();
    }
    report.m = static_cast<int>(accuracies.size());
    report.m_ref = ref.size();
    report.layers = ref.layers();
    report.problem_hash = ref.problem_hash();
    report.c = 2.0 * sum / static_cast<double>(report.m);
    return report;
}

HScoreReport benchmark_qpu(const SpinPolynomial& poly, const QpuModel& qpu, const BenchmarkOptions& opts,
                           std::uint64_t seed) {
    if (opts.m < 1) throw InvalidSizeError("m must be at least 1");
    const ReferenceDistribution ref = build_reference(poly, opts.reference, seed);

    const FilteredGraph fg = filter_by_threshold(qpu, opts.eta);
    EnumerateOptions eopts;
    eopts.seed = derive_seed(seed, streams::kRegions);
    auto regions = select_regions(enumerate_regions(fg, poly.num_spins(), eopts), 1);
    const Placement placement = map_circuit(poly, regions.front());
    const NoiseSpec noise = NoiseSpec::from_qpu(qpu, opts.trajectories);

    const Optimum optimum = brute_force_optimum(poly);
    const int layers = opts.reference.layers;
    std::optional<QaoaParams> shared;
    std::vector<double> accuracies;
    accuracies.reserve(static_cast<std::size_t>(opts.m));
    for (int i = 0; i < opts.m; ++i) {
        const std::uint64_t run_seed = derive_seed(seed, streams::kBenchmark, static_cast<std::uint64_t>(i));
        QaoaParams params;
        if (seed_dependent(opts.reference.optimizer)) {
            params = optimized_angles(poly, layers, opts.reference.optimizer, run_seed);
        } else {
            if (!shared) shared = optimized_angles(poly, layers, opts.reference.optimizer, seed);
            params = *shared;
        }
        const auto counts = noisy_sample(poly, params, placement, qpu, noise, opts.reference.shots,
                                         derive_seed(run_seed, streams::kSample));
        accuracies.push_back(accuracy(counts, optimum));
    }
    return h_score(accuracies, ref);
}

}  // namespace qdisco
