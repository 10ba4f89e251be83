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
#include "qdisco/problem.hpp"

namespace qdisco {
namespace {

ProblemGraph triangle() { return ProblemGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

TEST(SpinPolynomial, EvaluatesSingleProduct) {
    const SpinPolynomial p(2, {{1.0, {0, 1}}});
    EXPECT_DOUBLE_EQ(evaluate_cost(p, SpinAssignment({1, 1})), 1.0);
    EXPECT_DOUBLE_EQ(evaluate_cost(p, SpinAssignment({1, -1})), -1.0);
}

TEST(SpinPolynomial, CanonicalizesOnConstruction) {
    const SpinPolynomial p(3, {{1.0, {1, 0}}, {2.0, {0, 1}}, {0.5, {2, 2}}, {0.0, {2}}, {-1.0, {1}}, {1.0, {1}}});
    ASSERT_EQ(p.terms().size(), 1u);
    EXPECT_EQ(p.terms()[0].support, (std::vector<int>{0, 1}));
    EXPECT_DOUBLE_EQ(p.terms()[0].weight, 3.0);
    EXPECT_DOUBLE_EQ(p.constant_offset(), 0.5);
}

TEST(SpinPolynomial, RejectsOutOfRangeSupport) {
    EXPECT_THROW(SpinPolynomial(2, {{1.0, {0, 2}}}), DimensionError);
}

TEST(SpinPolynomial, LengthMismatchIsDimensionError) {
    const SpinPolynomial p(2, {{1.0, {0, 1}}});
    EXPECT_THROW(evaluate_cost(p, SpinAssignment({1, 1, 1})), DimensionError);
}

TEST(SpinAssignment, RejectsNonSpinValues) { EXPECT_THROW(SpinAssignment({1, 0}), RangeError); }

TEST(SpinAssignment, IndexRoundTrip) {
    for (BasisIndex b = 0; b < 32; ++b) EXPECT_EQ(SpinAssignment::from_index(b, 5).to_index(), b);
    EXPECT_EQ(SpinAssignment::from_index(0b01, 2).values(), (std::vector<int>{-1, 1}));
}

TEST(MaxCut, SingleEdgeEncoding) {
    const auto p = maxcut_to_spin_polynomial(ProblemGraph(2, {{0, 1, 1.0}}));
    ASSERT_EQ(p.terms().size(), 1u);
    EXPECT_DOUBLE_EQ(p.terms()[0].weight, 0.5);
    EXPECT_DOUBLE_EQ(p.constant_offset(), -0.5);
}

TEST(MaxCut, TriangleEncodingAndMinimum) {
    const auto p = maxcut_to_spin_polynomial(triangle());
    EXPECT_EQ(p.terms().size(), 3u);
    for (const auto& t : p.terms()) EXPECT_DOUBLE_EQ(t.weight, 0.5);
    EXPECT_DOUBLE_EQ(p.constant_offset(), -1.5);
    EXPECT_DOUBLE_EQ(evaluate_cost(p, SpinAssignment({1, 1, -1})), -2.0);
    const auto opt = brute_force_optimum(p);
    EXPECT_DOUBLE_EQ(opt.min_value, -2.0);
    EXPECT_EQ(opt.argmins.size(), 6u);
}

TEST(MaxCut, EmptyGraphIsZero) {
    const auto p = maxcut_to_spin_polynomial(ProblemGraph(3, {}));
    EXPECT_TRUE(p.terms().empty());
    for (BasisIndex b = 0; b < 8; ++b) EXPECT_DOUBLE_EQ(evaluate_cost(p, b), 0.0);
}

TEST(MaxCut, MatchesDirectCutCounterOnRandomGraphs) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 9;
        const auto g = oracle::random_graph(n, 0.5, 100 + trial, true);
        const auto p = maxcut_to_spin_polynomial(g);
        for (int k = 0; k < 20; ++k) {
            const auto s = SpinAssignment::from_index(rng() % (BasisIndex{1} << n), n);
            double cut = 0.0;
            for (const auto& e : g.edges()) {
                if (s[e.u] != s[e.v]) cut += e.weight;
            }
            EXPECT_NEAR(evaluate_cost(p, s), -cut, 1e-12);
            EXPECT_NEAR(cut_value(g, s), cut, 1e-12);
        }
    }
}

TEST(ProblemGraph, RejectsMalformedEdges) {
    EXPECT_THROW(ProblemGraph(2, {{0, 0, 1.0}}), SchemaError);
    EXPECT_THROW(ProblemGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}), SchemaError);
    EXPECT_THROW(ProblemGraph(2, {{0, 2, 1.0}}), SchemaError);
}

TEST(Labs, SmallCases) {
    const auto p2 = labs_to_spin_polynomial(2);
    EXPECT_TRUE(p2.terms().empty());
    EXPECT_DOUBLE_EQ(p2.constant_offset(), 1.0);
    EXPECT_DOUBLE_EQ(evaluate_cost(labs_to_spin_polynomial(3), SpinAssignment({1, 1, 1})), 5.0);
    EXPECT_DOUBLE_EQ(brute_force_optimum(labs_to_spin_polynomial(4)).min_value, 2.0);
    EXPECT_THROW(labs_to_spin_polynomial(1), InvalidSizeError);
}

TEST(Labs, ExpansionMatchesDirectFormulaExhaustively) {
    for (int n = 2; n <= 8; ++n) {
        const auto p = labs_to_spin_polynomial(n);
        EXPECT_LE(p.max_degree(), 4);
        for (BasisIndex b = 0; b < (BasisIndex{1} << n); ++b) {
            const auto s = SpinAssignment::from_index(b, n);
            EXPECT_NEAR(evaluate_cost(p, s), oracle::labs_direct(s.values()), 1e-9);
            EXPECT_NEAR(labs_energy(s), oracle::labs_direct(s.values()), 1e-9);
        }
    }
}

TEST(Symmetry, EvenDegreePolynomialsAreFlipInvariant) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 6;
        const auto p = trial % 2 ? labs_to_spin_polynomial(n) : maxcut_to_spin_polynomial(oracle::random_graph(n, 0.6, trial, true));
        ASSERT_TRUE(p.all_even_degree());
        for (int k = 0; k < 10; ++k) {
            const auto s = SpinAssignment::from_index(rng() % (BasisIndex{1} << n), n);
            EXPECT_NEAR(evaluate_cost(p, s), evaluate_cost(p, s.negated()), 1e-12);
        }
    }
}

TEST(BruteForce, ConstantPolynomialAllMinimizers) {
    const auto opt = brute_force_optimum(SpinPolynomial::constant(3, 2.5));
    EXPECT_DOUBLE_EQ(opt.min_value, 2.5);
    EXPECT_EQ(opt.argmins.size(), 8u);
}

TEST(BruteForce, SingleEdgeAntiAligned) {
    const auto opt = brute_force_optimum(maxcut_to_spin_polynomial(ProblemGraph(2, {{0, 1, 1.0}})));
    EXPECT_DOUBLE_EQ(opt.min_value, -1.0);
    const auto a = opt.assignments(2);
    ASSERT_EQ(a.size(), 2u);
    for (const auto& s : a) EXPECT_EQ(s[0], -s[1]);
}

TEST(BruteForce, GuardRejectsWideProblems) {
    EXPECT_THROW(brute_force_optimum(SpinPolynomial(kMaxDenseSpins + 1, {{1.0, {0, 1}}})), CapacityError);
}

TEST(ProblemFile, ParsesGraphAndLabs) {
    const auto g = parse_problem(R"({"num_vertices": 3, "edges": [[0, 1, 1.0], [2, 1, 2.0]]})");
    ASSERT_TRUE(g.graph.has_value());
    EXPECT_EQ(g.graph->edges()[1], (WeightedEdge{1, 2, 2.0}));
    const auto l = parse_problem(R"({"labs": 5})");
    EXPECT_EQ(l.num_spins(), 5);
    EXPECT_EQ(parse_problem(problem_to_json(g)).graph, g.graph);
    EXPECT_EQ(parse_problem(problem_to_json(l)).labs, l.labs);
}

TEST(ProblemFile, ReportsSchemaAndParseErrors) {
    EXPECT_THROW(parse_problem("{"), ParseError);
    EXPECT_THROW(parse_problem(R"({"edges": []})"), SchemaError);
    EXPECT_THROW(parse_problem(R"({"num_vertices": 2, "edges": [[0]]})"), SchemaError);
    EXPECT_DOUBLE_EQ(parse_problem(R"({"num_vertices": 2, "edges": [[0, 1]]})").graph->edges()[0].weight, 1.0);
}

}  // namespace
}  // namespace qdisco
