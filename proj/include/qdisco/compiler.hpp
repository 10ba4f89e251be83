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
#include <string>
#include <utility>
#include <vector>

#include "qdisco/hardware.hpp"
#include "qdisco/problem.hpp"

namespace qdisco {

/// Default error threshold: qubits and gates at or above 1% error are unusable.
inline constexpr double kDefaultEta = 0.01;

/// The QPU graph restricted to qubits with e_q < eta and couplings with
/// e_ij < eta whose endpoints both survive.
struct FilteredGraph {
    QpuModel parent;
    double eta = kDefaultEta;
    std::vector<int> qubits;         // ascending physical indices
    std::vector<Coupling> couplings;  // subset of parent.couplings(), same order
    std::vector<char> valid;         // valid[q] for every parent qubit
    std::vector<std::vector<int>> adjacency;  // indexed by physical qubit; empty for dropped qubits

    /// Number of threshold comparisons made while building this graph.
    std::size_t predicate_evaluations = 0;

    /// Size of the largest connected component, i.e. the widest region that can be placed.
    int largest_component() const;
};

FilteredGraph filter_by_threshold(const QpuModel& qpu, double eta);

struct SamplingRegion {
    std::vector<int> qubits;         // ascending physical indices
    std::vector<Coupling> couplings;  // induced couplings of the filtered graph
    double fidelity = 1.0;

    int size() const noexcept { return static_cast<int>(qubits.size()); }
    bool operator==(const SamplingRegion&) const = default;
};

/// prod (1 - e_q) over the qubits times prod (1 - e_ij) over the couplings.
double region_fidelity(std::span<const int> qubits, std::span<const Coupling> couplings, const QpuModel& qpu);

struct EnumerateOptions {
    /// Exhaustive enumeration when the filtered graph has at most this many qubits.
    int exact_limit = 20;
    /// Stochastic mode: minimum number of distinct candidates to aim for.
    std::size_t min_candidates = 0;
    std::size_t attempts_per_qubit = 64;
    std::uint64_t seed = 0;
    /// Hard guard on the exhaustive enumerator's output size.
    std::size_t max_regions = 4'000'000;
};

/// Connected induced subgraphs of size n, sorted by qubit list, each carrying its fidelity.
/// Above `exact_limit` surviving qubits a seeded random-growth sampler replaces the exhaustive scan.
std::vector<SamplingRegion> enumerate_regions(const FilteredGraph& fg, int n, const EnumerateOptions& opts = {});

struct SelectOptions {
    /// Restrict the selection to mutually isomorphic regions.
    bool isomorphic = false;
    /// Branch-and-bound node budget; past it the best selection found so far is returned.
    std::size_t search_budget = 2'000'000;
};

/// Selection objective: more regions first, then larger summed fidelity.
struct SelectionScore {
    std::size_t count = 0;
    double total_fidelity = 0.0;
};

SelectionScore selection_score(std::span<const SamplingRegion> regions);

/// Up to k pairwise qubit-disjoint regions maximizing (count, total fidelity).
/// Candidates are ranked by fidelity (ties: lexicographically smaller qubit list first)
/// and searched exhaustively by branch and bound; the result is listed in that rank order.
std::vector<SamplingRegion> select_regions(std::vector<SamplingRegion> candidates, int k,
                                           const SelectOptions& opts = {});

using PhysicalEdge = std::pair<int, int>;

/// One cost term scheduled on hardware. Swaps run first (moving logical qubits);
/// the interaction then acts on `route`: one coupling for two-body terms, a
/// chain covering all support qubits for higher degree, nothing for one-body terms.
struct ScheduledInteraction {
    std::size_t term_index = 0;
    std::vector<int> logical;
    std::vector<PhysicalEdge> swaps;
    std::vector<PhysicalEdge> route;

    bool operator==(const ScheduledInteraction&) const = default;
};

/// A cost layer mapped onto a region. Even layers (0, 2, ...) execute the
/// schedule forward, odd layers execute it mirrored, so the layout returns to
/// `initial_layout` after every pair of layers.
struct Placement {
    SamplingRegion region;
    std::vector<int> initial_layout;  // logical -> physical
    std::vector<ScheduledInteraction> schedule;

    std::size_t swap_count() const;
    std::vector<int> layout_after_forward() const;
    std::vector<int> final_layout(int layers) const;

    bool operator==(const Placement&) const = default;
};

/// Maps the cost layer of `poly` onto `region`: embedding fast path when the
/// interaction graph fits inside the region (n <= 12), else greedy weighted
/// placement plus pairwise improvement, then shortest-path swap routing.
Placement map_circuit(const SpinPolynomial& poly, const SamplingRegion& region);

/// Throws PlacementError when the placement is inconsistent with `qpu` or `poly`.
void validate_placement(const Placement& placement, const SpinPolynomial& poly, const QpuModel& qpu);

/// Adjacency-list graph isomorphism by backtracking (intended for n <= 16).
bool regions_isomorphic(const SamplingRegion& a, const SamplingRegion& b);

}  // namespace qdisco
