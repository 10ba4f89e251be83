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

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdisco/compiler.hpp"
#include "qdisco/errors.hpp"
#include "qdisco/hscore.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {
namespace {

constexpr double kPi = std::numbers::pi;

SpinPolynomial single_edge() { return maxcut_to_spin_polynomial(ProblemGraph(2, {{0, 1, 1.0}})); }

SpinPolynomial random_poly(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i) terms.push_back({w(rng), {i}});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) terms.push_back({w(rng), {i, j}});
    if (n >= 3) terms.push_back({w(rng), {0, 1, 2}});
    return SpinPolynomial(n, std::move(terms), w(rng));
}

QaoaParams random_params(int p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> g(0.0, 2 * kPi), b(0.0, kPi);
    QaoaParams params;
    for (int l = 0; l < p; ++l) {
        params.gammas.push_back(g(rng));
        params.betas.push_back(b(rng));
    }
    return params;
}

TEST(UniformState, Amplitudes) {
    const auto s1 = uniform_state(1);
    EXPECT_NEAR(s1.amplitudes[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    const auto s2 = uniform_state(2);
    for (Eigen::Index b = 0; b < 4; ++b) EXPECT_DOUBLE_EQ(s2.amplitudes[b].real(), 0.5);
    EXPECT_NEAR(uniform_state(3).norm(), 1.0, 1e-15);
    EXPECT_THROW(uniform_state(0), CapacityError);
    EXPECT_THROW(uniform_state(kMaxDenseSpins + 1), CapacityError);
}

TEST(Phase, IdentityGlobalPhaseAndDiagonal) {
    std::mt19937_64 rng(1);
    const auto poly = random_poly(3, rng);
    const auto s = build_qaoa_state(poly, random_params(1, rng));
    EXPECT_TRUE(apply_phase(s, poly, 0.0).amplitudes.isApprox(s.amplitudes, 1e-15));

    const auto c = SpinPolynomial::constant(3, 1.7);
    const auto phased = apply_phase(s, c, 0.4);
    const std::complex<double> g = std::polar(1.0, -0.4 * 1.7);
    EXPECT_TRUE(phased.amplitudes.isApprox(g * s.amplitudes, 1e-14));

    const auto u = apply_phase(uniform_state(2), single_edge(), kPi);
    for (Eigen::Index b = 0; b < 4; ++b) EXPECT_NEAR(u.probabilities()[b], 0.25, 1e-15);
    EXPECT_THROW(apply_phase(uniform_state(2), poly, 0.1), DimensionError);
}

TEST(Phase, AnglesCompose) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto poly = random_poly(4, rng);
        const auto s = build_qaoa_state(poly, random_params(1, rng));
        const auto twice = apply_phase(apply_phase(s, poly, 0.3), poly, 0.45);
        EXPECT_TRUE(twice.amplitudes.isApprox(apply_phase(s, poly, 0.75).amplitudes, 1e-12));
    }
}

TEST(Mixer, Examples) {
    const auto zero = StateVectorXd::basis(3, 0);
    EXPECT_TRUE(apply_mixer(zero, 0.0).amplitudes.isApprox(zero.amplitudes));
    EXPECT_NEAR(apply_mixer(zero, kPi / 2).probabilities()[7], 1.0, 1e-15);
    const auto half = apply_mixer(StateVectorXd::basis(1, 0), kPi / 4).probabilities();
    EXPECT_NEAR(half[0], 0.5, 1e-15);
    EXPECT_NEAR(half[1], 0.5, 1e-15);
}

TEST(Qaoa, ZeroLayersIsUniform) {
    const auto s = build_qaoa_state(single_edge(), QaoaParams{});
    EXPECT_TRUE(s.amplitudes.isApprox(uniform_state(2).amplitudes));
}

TEST(Qaoa, MatchesDenseExponentialOracle) {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 4; ++n) {
        for (int t = 0; t < 6; ++t) {
            const auto poly = random_poly(n, rng);
            const auto params = random_params(1 + t % 3, rng);
            const auto got = build_qaoa_state(poly, params);
            const auto want = oracle::dense_qaoa_state(poly, params);
            ASSERT_EQ(got.dim(), want.size());
            EXPECT_LE((got.amplitudes - want).cwiseAbs().maxCoeff(), 1e-8);
        }
    }
}

TEST(Qaoa, SingleEdgeGridMatchesOracle) {
    const auto poly = single_edge();
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const QaoaParams params{{2 * kPi * i / 5}, {kPi * j / 5}};
            EXPECT_NEAR(expectation(build_qaoa_state(poly, params), poly), oracle::dense_expectation(poly, params), 1e-8);
        }
}

TEST(Qaoa, UnitarityOnRandomInputs) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto poly = random_poly(2 + t % 6, rng);
        EXPECT_NEAR(build_qaoa_state(poly, random_params(1 + t % 4, rng)).norm(), 1.0, 1e-9);
    }
}

TEST(Qaoa, FloatScalarTracksDouble) {
    std::mt19937_64 rng(5);
    const auto poly = random_poly(5, rng);
    const auto params = random_params(2, rng);
    const auto d = build_qaoa_state<double>(poly, params);
    const auto f = build_qaoa_state<float>(poly, params);
    EXPECT_LE((f.probabilities().cast<double>() - d.probabilities()).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(Expectation, Examples) {
    EXPECT_NEAR(expectation(uniform_state(2), single_edge()), -0.5, 1e-15);
    const auto tri = maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
    const auto opt = brute_force_optimum(tri);
    EXPECT_DOUBLE_EQ(expectation(StateVectorXd::basis(3, opt.argmins[0]), tri), opt.min_value);
    std::mt19937_64 rng(6);
    const auto s = build_qaoa_state(tri, random_params(2, rng));
    const double e = expectation(s, tri);
    EXPECT_GE(e, -2.0 - 1e-12);
    EXPECT_LE(e, 0.0 + 1e-12);
}

TEST(Expectation, AgreesWithShotEstimate) {
    std::mt19937_64 rng(7);
    const auto poly = random_poly(4, rng);
    const auto s = build_qaoa_state(poly, random_params(2, rng));
    const auto diag = cost_diagonal(poly);
    const std::int64_t shots = 100000;
    const auto counts = sample(s, shots, 99);
    double mean = 0.0, sq = 0.0;
    for (const auto& [b, c] : counts.counts()) {
        mean += diag[static_cast<Eigen::Index>(b)] * c;
        sq += diag[static_cast<Eigen::Index>(b)] * diag[static_cast<Eigen::Index>(b)] * c;
    }
    mean /= shots;
    const double se = std::sqrt((sq / shots - mean * mean) / shots);
    EXPECT_LE(std::abs(mean - expectation(s, poly)), 5 * se);
}

TEST(Sample, BasisUniformAndDeterminism) {
    const auto basis = sample(StateVectorXd::basis(2, 0b01), 500, 1);
    EXPECT_EQ(basis.count(0b01), 500);
    EXPECT_EQ(basis.bitstring(0b01), "01");

    const std::int64_t shots = 100000;
    const auto u = sample(uniform_state(2), shots, 2);
    const double sigma = std::sqrt(shots * 0.25 * 0.75);
    for (BasisIndex b = 0; b < 4; ++b) EXPECT_LE(std::abs(u.count(b) - 25000.0), 5 * sigma);
    EXPECT_EQ(sample(uniform_state(3), 1000, 5), sample(uniform_state(3), 1000, 5));
    EXPECT_THROW(sample(uniform_state(2), 0, 1), RangeError);
}

TEST(ShotCounts, BitstringConventionAndTotals) {
    ShotCounts c(3);
    c.add(0b001, 2);
    c.add(0b100);
    EXPECT_EQ(c.bitstring(0b001), "001");
    EXPECT_EQ(c.bitstring(0b100), "100");
    EXPECT_EQ(c.parse_bitstring("100"), 0b100u);
    EXPECT_EQ(c.total(), 3);
    ShotCounts d(3);
    d.add(0b001);
    c.merge(d);
    EXPECT_EQ(c.count(0b001), 3);
    EXPECT_EQ(c.total(), 4);
}

// ---------------------------------------------------------------------------
// Placed and noisy execution.

QpuModel topology(TopologyKind kind, int size, const ErrorProfile& e) {
    TopologySpec spec;
    spec.kind = kind;
    spec.size = size;
    if (kind == TopologyKind::grid) {
        spec.rows = 2;
        spec.cols = 3;
    }
    return synthesize_topology(spec, e);
}

TEST(Placed, SwapsAreTransparentOnRandomPlacements) {
    std::mt19937_64 rng(8);
    const TopologyKind kinds[] = {TopologyKind::line, TopologyKind::t_shape_7, TopologyKind::heavy_hex_16, TopologyKind::grid,
                                  TopologyKind::ring};
    int swapped = 0;
    for (int t = 0; t < 25; ++t) {
        const auto q = topology(kinds[t % 5], 6, ErrorProfile::uniform(0.0, 0.0));
        const int n = 3 + t % 4;
        const auto poly = t % 7 == 3 ? labs_to_spin_polynomial(n) : maxcut_to_spin_polynomial(oracle::random_graph(n, 0.7, 50 + t, true));
        EnumerateOptions eo;
        const auto regions = enumerate_regions(filter_by_threshold(q, 1.0), n, eo);
        const auto& region = regions[rng() % regions.size()];
        const auto placement = map_circuit(poly, region);
        swapped += placement.swap_count() > 0;
        const auto params = random_params(1 + t % 3, rng);
        const auto placed = simulate_placed(poly, params, placement);
        EXPECT_NEAR(placed.state.norm(), 1.0, 1e-9);
        const Eigen::VectorXd got = logical_probabilities(placed, placement);
        const Eigen::VectorXd want = build_qaoa_state(poly, params).probabilities();
        EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-9) << "trial " << t;
        EXPECT_EQ(placed.final_layout, placement.final_layout(params.layers()));
    }
    EXPECT_GE(swapped, 10);
}

TEST(Noisy, NoiselessLimitMatchesIdealDistribution) {
    const auto q = topology(TopologyKind::line, 4, ErrorProfile::uniform(0.0, 0.0));
    const auto poly = maxcut_to_spin_polynomial(ProblemGraph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}, {0, 2, 1.0}}));
    const auto region = enumerate_regions(filter_by_threshold(q, 1.0), 4).front();
    const auto placement = map_circuit(poly, region);
    const QaoaParams params{{0.7, 0.3}, {0.4, 0.2}};
    const std::int64_t shots = 40000;
    const auto counts = noisy_sample(poly, params, placement, q, NoiseSpec::from_qpu(q), shots, 3);
    const Eigen::VectorXd probs = build_qaoa_state(poly, params).probabilities();
    for (BasisIndex b = 0; b < 16; ++b) {
        const double p = probs[static_cast<Eigen::Index>(b)];
        const double sigma = std::sqrt(shots * p * (1 - p)) + 1.0;
        EXPECT_LE(std::abs(counts.count(b) - shots * p), 5 * sigma) << b;
    }
}

TEST(Noisy, HalfReadoutFlipScramblesOutcomes) {
    Eigen::VectorXd readout = Eigen::VectorXd::Constant(3, 0.5);
    const QpuModel q("flip", readout, {{0, 1, 0.0}, {1, 2, 0.0}});
    const auto poly = maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
    const auto region = enumerate_regions(filter_by_threshold(q, 1.0), 3).front();
    const auto placement = map_circuit(poly, region);
    const std::int64_t shots = 80000;
    const auto counts = noisy_sample(poly, {{1.1}, {0.3}}, placement, q, NoiseSpec::from_qpu(q), shots, 4);
    const double sigma = std::sqrt(shots * 0.125 * 0.875);
    for (BasisIndex b = 0; b < 8; ++b) EXPECT_LE(std::abs(counts.count(b) - shots / 8.0), 5 * sigma);
}

TEST(Noisy, GateErrorLowersAccuracyAtOptimalAngles) {
    const QpuModel clean("c", Eigen::Vector2d::Zero(), {{0, 1, 0.0}});
    const QpuModel noisy("n", Eigen::Vector2d::Zero(), {{0, 1, 0.1}});
    const auto poly = single_edge();
    const auto region = enumerate_regions(filter_by_threshold(clean, 1.0), 2).front();
    const auto placement = map_circuit(poly, region);
    const auto opt = brute_force_optimum(poly);
    QaoaParams params;
    double best = -1.0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            const QaoaParams trial{{2 * kPi * i / 32}, {kPi * j / 32}};
            const auto probs = build_qaoa_state(poly, trial).probabilities();
            double mass = 0.0;
            for (BasisIndex b : opt.argmins) mass += probs[static_cast<Eigen::Index>(b)];
            if (mass > best) {
                best = mass;
                params = trial;
            }
        }
    ASSERT_NEAR(best, 1.0, 1e-12);
    double sum_clean = 0.0, sum_noisy = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        sum_clean += accuracy(noisy_sample(poly, params, placement, clean, NoiseSpec::from_qpu(clean), 2000, seed), opt);
        sum_noisy += accuracy(noisy_sample(poly, params, placement, noisy, NoiseSpec::from_qpu(noisy), 2000, seed), opt);
    }
    EXPECT_NEAR(sum_clean / 20, 1.0, 1e-12);
    EXPECT_LT(sum_noisy, sum_clean);
}

TEST(Noisy, DeterministicAndValidated) {
    const auto q = topology(TopologyKind::line, 3, ErrorProfile::uniform(0.05, 0.05));
    const auto poly = maxcut_to_spin_polynomial(ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
    const auto placement = map_circuit(poly, enumerate_regions(filter_by_threshold(q, 1.0), 3).front());
    const QaoaParams params{{0.5}, {0.3}};
    const auto noise = NoiseSpec::from_qpu(q, 16);
    EXPECT_EQ(noisy_sample(poly, params, placement, q, noise, 1000, 9), noisy_sample(poly, params, placement, q, noise, 1000, 9));
    NoiseSpec bad = noise;
    bad.readout_flip[0] = 1.0;
    EXPECT_THROW(noisy_sample(poly, params, placement, q, bad, 10, 1), RangeError);
    const auto other = topology(TopologyKind::line, 2, ErrorProfile::uniform(0.0, 0.0));
    EXPECT_THROW(noisy_sample(poly, params, placement, other, NoiseSpec::from_qpu(other), 10, 1), Error);
}

TEST(Params, PackUnpack) {
    const QaoaParams p{{0.1, 0.2}, {0.3, 0.4}};
    const Eigen::VectorXd x = p.packed();
    EXPECT_DOUBLE_EQ(x[1], 0.3);
    EXPECT_EQ(QaoaParams::unpack(x), p);
    EXPECT_THROW((QaoaParams{{0.1}, {}}).validate(), DimensionError);
}

}  // namespace
}  // namespace qdisco
