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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdisco/errors.hpp"
#include "qdisco/optimizer.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {
namespace {

constexpr double kPi = std::numbers::pi;

SpinPolynomial single_edge() { return maxcut_to_spin_polynomial(ProblemGraph(2, {{0, 1, 1.0}})); }

TEST(Optimizer, SingleEdgeReachesGridOptimum) {
    const auto poly = single_edge();
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j)
            grid_min = std::min(grid_min, oracle::dense_expectation(poly, {{2 * kPi * i / 200}, {kPi * j / 200}}));
    const auto trace = optimize(poly, 1, {});
    ASSERT_TRUE(trace.ok());
    EXPECT_LE(trace.best_value, grid_min + 0.02);
    EXPECT_NEAR(QaoaObjective(poly)(trace.best_params), trace.best_value, 1e-12);
}

TEST(Optimizer, ConstantObjectiveConverges) {
    const auto trace = optimize(SpinPolynomial::constant(3, -1.25), 2, {});
    EXPECT_TRUE(trace.converged);
    EXPECT_NEAR(trace.best_value, -1.25, 1e-12);
}

TEST(Optimizer, DeterministicForFixedSeed) {
    const auto poly = maxcut_to_spin_polynomial(oracle::random_graph(6, 0.5, 2, true));
    OptimizerConfig cfg;
    cfg.method = OptimizerMethod::nelder_mead;
    cfg.seed = 17;
    EXPECT_EQ(optimize(poly, 2, cfg), optimize(poly, 2, cfg));
}

TEST(Optimizer, TraceIsConsistentWithBest) {
    const auto poly = maxcut_to_spin_polynomial(oracle::random_graph(5, 0.6, 3));
    for (int p = 1; p <= 3; ++p) {
        OptimizerConfig cfg;
        cfg.max_evaluations = 300;
        const auto trace = optimize(poly, p, cfg);
        ASSERT_FALSE(trace.entries.empty());
        EXPECT_EQ(static_cast<int>(trace.entries.size()), trace.evaluations);
        EXPECT_LE(trace.evaluations, cfg.max_evaluations);
        double running = std::numeric_limits<double>::infinity();
        for (const auto& e : trace.entries) {
            EXPECT_EQ(e.params.layers(), p);
            running = std::min(running, e.value);
        }
        EXPECT_DOUBLE_EQ(trace.best_value, running);
    }
}

TEST(Optimizer, DeeperCircuitsDoNotRegress) {
    const auto poly = maxcut_to_spin_polynomial(oracle::random_graph(6, 0.5, 4));
    const double p1 = optimize(poly, 1, {}).best_value;
    const double p2 = optimize(poly, 2, {}).best_value;
    EXPECT_LE(p2, p1 + 1e-9);
}

TEST(Optimizer, RespectsSmallBudget) {
    OptimizerConfig cfg;
    cfg.method = OptimizerMethod::nelder_mead;
    cfg.max_evaluations = 7;
    const auto trace = optimize(single_edge(), 2, cfg);
    EXPECT_TRUE(trace.ok());
    EXPECT_FALSE(trace.converged);
    EXPECT_EQ(trace.evaluations, 7);
}

TEST(Optimizer, StartsFromGivenInitialPoint) {
    OptimizerConfig cfg;
    cfg.method = OptimizerMethod::nelder_mead;
    cfg.initial = QaoaParams{{0.3}, {0.2}};
    const auto trace = optimize(single_edge(), 1, cfg);
    EXPECT_EQ(trace.entries.front().params, *cfg.initial);
}

TEST(Optimizer, NonFiniteValueStopsWithError) {
    int calls = 0;
    const Evaluator eval = [&](const QaoaParams& p) {
        ++calls;
        return calls == 5 ? std::numeric_limits<double>::quiet_NaN() : p.gammas[0] * p.gammas[0];
    };
    OptimizerConfig cfg;
    cfg.method = OptimizerMethod::nelder_mead;
    const auto trace = optimize(1, eval, cfg);
    EXPECT_FALSE(trace.ok());
    EXPECT_EQ(calls, 5);
    EXPECT_TRUE(std::isfinite(trace.best_value));
}

TEST(Optimizer, NoisyEvaluatorStaysFinite) {
    const auto poly = single_edge();
    const QaoaObjective objective(poly);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.02);
    OptimizerConfig cfg;
    cfg.noisy = true;
    cfg.max_evaluations = 200;
    const auto trace = optimize(1, [&](const QaoaParams& p) { return objective(p) + noise(rng); }, cfg);
    EXPECT_TRUE(trace.ok());
    EXPECT_LT(objective(trace.best_params), -0.8);
}

TEST(Optimizer, RejectsBadConfig) {
    OptimizerConfig cfg;
    cfg.max_evaluations = 0;
    EXPECT_THROW(cfg.validate(), RangeError);
    cfg = {};
    cfg.tolerance = -1.0;
    EXPECT_THROW(cfg.validate(), RangeError);
    cfg = {};
    cfg.initial = QaoaParams{{0.1}, {0.1}};
    EXPECT_THROW(optimize(single_edge(), 2, cfg), DimensionError);
    EXPECT_THROW(parse_optimizer_method("bfgs"), SchemaError);
    EXPECT_EQ(parse_optimizer_method(to_string(OptimizerMethod::nelder_mead)), OptimizerMethod::nelder_mead);
}

TEST(Landscape, PeriodicInBothAngles) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    for (int t = 0; t < 10; ++t) {
        const QaoaObjective f(maxcut_to_spin_polynomial(oracle::random_graph(5, 0.6, 60 + t)));
        const double g = u(rng), b = u(rng) / 2;
        const double base = f({{g}, {b}});
        EXPECT_NEAR(f({{g + 2 * kPi}, {b}}), base, 1e-9);
        EXPECT_NEAR(f({{g}, {b + kPi}}), base, 1e-9);
    }
}

}  // namespace
}  // namespace qdisco
