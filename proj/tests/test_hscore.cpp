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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qdisco/errors.hpp"
#include "qdisco/hscore.hpp"

namespace qdisco {
namespace {

SpinPolynomial triangle() { return maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}})); }

ReferenceDistribution ramp_reference() {
    std::vector<double> s(100);
    for (int i = 0; i < 100; ++i) s[static_cast<std::size_t>(i)] = i / 100.0;
    return ReferenceDistribution(1, 1, s);
}

std::vector<double> random_accuracies(int m, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> k(0, 20);
    std::vector<double> out(static_cast<std::size_t>(m));
    for (double& x : out) x = k(rng) / 20.0;
    return out;
}

TEST(Accuracy, MassOnOptimalSet) {
    const auto poly = maxcut_to_spin_polynomial(ProblemGraph(2, {{0, 1, 1.0}}));
    ShotCounts c(2);
    c.add(0b01, 30);
    c.add(0b10, 20);
    EXPECT_DOUBLE_EQ(accuracy(c, poly), 1.0);
    c.add(0b00, 50);
    EXPECT_DOUBLE_EQ(accuracy(c, poly), 0.5);
    ShotCounts miss(2);
    miss.add(0b11, 4);
    EXPECT_DOUBLE_EQ(accuracy(miss, poly), 0.0);
    EXPECT_THROW(accuracy(ShotCounts(2), poly), RangeError);
    EXPECT_THROW(accuracy(ShotCounts(3), poly), DimensionError);
}

TEST(Reference, MidpointCdf) {
    const auto ref = ramp_reference();
    EXPECT_DOUBLE_EQ(ref.cdf(-0.1), 0.0);
    EXPECT_DOUBLE_EQ(ref.cdf(0.0), 0.005);
    EXPECT_DOUBLE_EQ(ref.cdf(0.505), 0.51);
    EXPECT_DOUBLE_EQ(ref.cdf(0.99), 0.995);
    EXPECT_DOUBLE_EQ(ref.cdf(1.0), 1.0);
    const ReferenceDistribution flat(1, 1, std::vector<double>(100, 0.5));
    EXPECT_DOUBLE_EQ(flat.cdf(0.5), 0.5);
    EXPECT_DOUBLE_EQ(flat.cdf(0.49), 0.0);
    EXPECT_DOUBLE_EQ(flat.cdf(0.51), 1.0);
}

TEST(Reference, Validation) {
    EXPECT_THROW(ReferenceDistribution(1, 1, std::vector<double>(99, 0.5)), InvalidSizeError);
    auto bad = std::vector<double>(100, 0.5);
    bad[3] = 1.5;
    EXPECT_THROW(ReferenceDistribution(1, 1, bad), RangeError);
    EXPECT_THROW(score(-0.1, ramp_reference()), RangeError);
    EXPECT_THROW(h_score(std::vector<double>{}, ramp_reference()), InvalidSizeError);
}

TEST(HScore, ReferenceAgainstItselfIsOne) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const auto samples = random_accuracies(100 + t * 37, rng);
        const ReferenceDistribution ref(7, 2, samples);
        EXPECT_NEAR(h_score(samples, ref).c, 1.0, 1e-12);
    }
}

TEST(HScore, CeilingAndFloor) {
    std::vector<double> s(100, 0.3);
    for (int i = 0; i < 100; ++i) s[static_cast<std::size_t>(i)] = 0.2 + 0.001 * i;
    const ReferenceDistribution ref(1, 1, s);
    EXPECT_DOUBLE_EQ(h_score(std::vector<double>(10, 0.9), ref).c, 2.0);
    EXPECT_DOUBLE_EQ(h_score(std::vector<double>(10, 0.1), ref).c, 0.0);
}

TEST(HScore, RangeAndDominance) {
    std::mt19937_64 rng(2);
    const ReferenceDistribution ref(1, 1, random_accuracies(300, rng));
    for (int t = 0; t < 50; ++t) {
        auto low = random_accuracies(40, rng);
        auto high = low;
        for (double& x : high) x = std::min(1.0, x + 0.05 * static_cast<double>(rng() % 3));
        const auto a = h_score(low, ref);
        const auto b = h_score(high, ref);
        EXPECT_GE(a.c, 0.0);
        EXPECT_LE(a.c, 2.0);
        EXPECT_GE(b.c, a.c);
        EXPECT_EQ(a.m, 40);
        EXPECT_EQ(a.m_ref, 300);
    }
}

TEST(HScore, ProblemHashSeparatesProblems) {
    EXPECT_EQ(problem_hash(triangle()), problem_hash(triangle()));
    EXPECT_NE(problem_hash(triangle()), problem_hash(labs_to_spin_polynomial(3)));
    const auto heavier = maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
    EXPECT_NE(problem_hash(triangle()), problem_hash(heavier));
}

TEST(Reference, DeterministicAndTagged) {
    ReferenceOptions opts;
    opts.m_ref = 120;
    opts.shots = 32;
    const auto poly = maxcut_to_spin_polynomial(oracle::random_graph(6, 0.5, 12, true));
    const auto a = build_reference(poly, opts, 3);
    EXPECT_EQ(a, build_reference(poly, opts, 3));
    EXPECT_NE(a, build_reference(poly, opts, 4));
    EXPECT_EQ(a.size(), 120);
    EXPECT_EQ(a.problem_hash(), problem_hash(poly));
    opts.m_ref = 50;
    EXPECT_THROW(build_reference(triangle(), opts, 3), InvalidSizeError);
}

QpuModel line(int n, double readout, double gate) {
    TopologySpec spec;
    spec.size = n;
    return synthesize_topology(spec, ErrorProfile::uniform(readout, gate));
}

TEST(Benchmark, NoiselessQpuScoresNearOne) {
    BenchmarkOptions opts;
    opts.reference.m_ref = 300;
    opts.reference.shots = 32;
    opts.m = 300;
    const auto poly = maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
    const auto report = benchmark_qpu(poly, line(3, 0.0, 0.0), opts, 5);
    EXPECT_NEAR(report.c, 1.0, 0.15);
    EXPECT_EQ(report.m, 300);
    EXPECT_EQ(report.layers, 1);
}

TEST(Benchmark, HeavyNoiseScoresLower) {
    BenchmarkOptions opts;
    opts.reference.m_ref = 200;
    opts.reference.shots = 32;
    opts.m = 200;
    opts.trajectories = 16;
    const auto poly = maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
    const double clean = benchmark_qpu(poly, line(3, 0.0, 0.0), opts, 6).c;
    const double noisy = benchmark_qpu(poly, line(3, 0.1, 0.1), opts, 6).c;
    EXPECT_LT(noisy, clean);
}

}  // namespace
}  // namespace qdisco
