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

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdisco {

/// Computational basis index. Qubit / spin i is bit i (qubit 0 least significant).
using BasisIndex = std::uint64_t;

/// Largest spin count accepted by exhaustive enumeration and dense statevectors.
inline constexpr int kMaxDenseSpins = 24;

/// bit 0 -> spin +1, bit 1 -> spin -1.
constexpr int spin_of_bit(BasisIndex b, int i) { return ((b >> i) & 1U) ? -1 : +1; }

struct Term {
    double weight = 0.0;
    std::vector<int> support;  // sorted, duplicate-free after canonicalization

    bool operator==(const Term&) const = default;
};

/// Weighted sum of spin monomials plus a constant:
///
///     f(s) = offset + sum_k w_k * prod_{i in t_k} s_i,   s_i in {-1, +1}.
///
/// Construction canonicalizes: repeated indices inside one support cancel in
/// pairs (s_i^2 = 1), empty supports fold into the offset, identical supports
/// merge, zero weights drop, and terms are sorted by (degree, support).
class SpinPolynomial {
   public:
    SpinPolynomial() = default;
    SpinPolynomial(int num_spins, std::vector<Term> terms, double constant_offset = 0.0);

    static SpinPolynomial constant(int num_spins, double value) { return SpinPolynomial(num_spins, {}, value); }

    int num_spins() const noexcept { return num_spins_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    double constant_offset() const noexcept { return offset_; }
    int max_degree() const noexcept;
    bool all_even_degree() const noexcept;

    bool operator==(const SpinPolynomial&) const = default;

   private:
    int num_spins_ = 0;
    std::vector<Term> terms_;
    double offset_ = 0.0;
};

class SpinAssignment {
   public:
    SpinAssignment() = default;
    /// Throws RangeError on any entry other than +1 / -1.
    explicit SpinAssignment(std::vector<int> values);

    static SpinAssignment from_index(BasisIndex b, int n);
    static SpinAssignment all_up(int n) { return SpinAssignment(std::vector<int>(static_cast<std::size_t>(n), 1)); }

    int size() const noexcept { return static_cast<int>(values_.size()); }
    int operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& values() const noexcept { return values_; }
    BasisIndex to_index() const;
    SpinAssignment negated() const;

    bool operator==(const SpinAssignment&) const = default;
    auto operator<=>(const SpinAssignment&) const = default;

   private:
    std::vector<int> values_;
};

struct WeightedEdge {
    int u = 0;
    int v = 0;
    double weight = 1.0;

    bool operator==(const WeightedEdge&) const = default;
};

/// Undirected weighted graph; edges normalized so that u < v, sorted, unique.
class ProblemGraph {
   public:
    ProblemGraph() = default;
    ProblemGraph(int num_vertices, std::vector<WeightedEdge> edges);

    int num_vertices() const noexcept { return num_vertices_; }
    const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
    double total_weight() const noexcept;

    bool operator==(const ProblemGraph&) const = default;

   private:
    int num_vertices_ = 0;
    std::vector<WeightedEdge> edges_;
};

double evaluate_cost(const SpinPolynomial& poly, const SpinAssignment& s);
double evaluate_cost(const SpinPolynomial& poly, BasisIndex b);

/// C(b) for every basis index b, length 2^n. Throws CapacityError above kMaxDenseSpins.
Eigen::VectorXd cost_diagonal(const SpinPolynomial& poly);

/// sum_{(u,v,w)} w (s_u s_v - 1) / 2, i.e. the negated cut weight.
SpinPolynomial maxcut_to_spin_polynomial(const ProblemGraph& g);

/// Aperiodic autocorrelation energy sum_{k=1}^{n-1} C_k^2 expanded into monomials.
SpinPolynomial labs_to_spin_polynomial(int n);

/// Direct LABS energy, no polynomial expansion.
double labs_energy(const SpinAssignment& s);

/// Total weight of edges whose endpoints carry opposite spins.
double cut_value(const ProblemGraph& g, const SpinAssignment& s);

struct Optimum {
    double min_value = 0.0;
    std::vector<BasisIndex> argmins;  // ascending

    std::vector<SpinAssignment> assignments(int n) const;
};

/// Exhaustive minimum and all minimizers (ties within 1e-9 relative).
Optimum brute_force_optimum(const SpinPolynomial& poly);

/// A problem file: either a weighted graph (MaxCut) or a LABS length.
struct ProblemInstance {
    std::optional<ProblemGraph> graph;
    std::optional<int> labs;

    int num_spins() const;
    SpinPolynomial polynomial() const;
};

ProblemInstance parse_problem(std::string_view json_text);
ProblemInstance load_problem_file(const std::string& path);
std::string problem_to_json(const ProblemInstance& problem);

}  // namespace qdisco
