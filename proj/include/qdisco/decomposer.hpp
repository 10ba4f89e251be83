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
#include <vector>

#include "qdisco/problem.hpp"

namespace qdisco {

/// Assignment of every vertex to one of `capacities.size()` parts.
struct Partition {
    std::vector<int> part_of;
    std::vector<int> capacities;
    std::vector<WeightedEdge> cut_edges;

    int num_parts() const noexcept { return static_cast<int>(capacities.size()); }
    std::vector<int> part_sizes() const;
    /// Vertices of each part, ascending.
    std::vector<std::vector<int>> members() const;
    double cut_weight() const;

    bool operator==(const Partition&) const = default;
};

/// Validates sizes against capacities and derives the cut edges.
Partition make_partition(const ProblemGraph& g, std::vector<int> part_of, std::vector<int> capacities);

/// Part sizes used by balanced_mincut: exactly the capacities when they sum to
/// |V|, otherwise the most even split with size_i <= capacity_i.
std::vector<int> balanced_targets(int num_vertices, const std::vector<int>& capacities);

struct MincutOptions {
    std::uint64_t seed = 0;
    int restarts = 8;
    int max_passes = 50;
};

/// Multi-start greedy growth followed by Kernighan-Lin swap passes; minimizes
/// cut weight with part sizes fixed to balanced_targets().
Partition balanced_mincut(const ProblemGraph& g, const std::vector<int>& capacities, const MincutOptions& opts = {});

struct Subproblem {
    ProblemGraph graph;
    std::vector<int> vertices;  // local index -> original vertex
};

std::vector<Subproblem> extract_subproblems(const ProblemGraph& g, const Partition& partition);

/// Global assignment obtained by placing each part's local solution unchanged.
SpinAssignment concatenate_solutions(const ProblemGraph& g, const Partition& partition,
                                     const std::vector<SpinAssignment>& local_solutions);

/// Coarse MaxCut over per-part flip variables: vertex a per part, and
/// W_ab = sum over cut edges (u in a, v in b) of w_uv s_u s_v at the local solutions.
ProblemGraph build_merge_problem(const ProblemGraph& g, const Partition& partition,
                                 const std::vector<SpinAssignment>& local_solutions);

struct MergeOptions {
    int brute_force_limit = 20;
    std::uint64_t seed = 0;
};

/// Chooses per-part flips maximizing the global cut and returns the composed
/// assignment; never worse than concatenation (all-unflipped is a candidate).
SpinAssignment merge_solutions(const ProblemGraph& g, const Partition& partition,
                               const std::vector<SpinAssignment>& local_solutions, const MergeOptions& opts = {});

}  // namespace qdisco
