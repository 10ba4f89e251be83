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
#include <optional>
#include <string>
#include <vector>

#include "qdisco/compiler.hpp"
#include "qdisco/decomposer.hpp"
#include "qdisco/hardware.hpp"
#include "qdisco/optimizer.hpp"
#include "qdisco/problem.hpp"

namespace qdisco {

/// One QPU's share of a leaf: disjoint regions run as a single parallel batch.
struct LeafAssignment {
    std::string qpu;
    std::vector<SamplingRegion> regions;
    std::vector<std::int64_t> shots;  // per region

    bool operator==(const LeafAssignment&) const = default;
};

struct PlanNode {
    std::vector<int> vertices;  // ascending, in root numbering
    std::vector<int> children;  // node indices; empty for leaves
    int depth = 0;

    bool operator==(const PlanNode&) const = default;
};

struct PlanLeaf {
    int node = 0;
    std::vector<int> vertices;
    std::vector<LeafAssignment> assignments;

    int size() const noexcept { return static_cast<int>(vertices.size()); }
    int num_regions() const;
    bool operator==(const PlanLeaf&) const = default;
};

struct ExecutionPlan {
    int num_vertices = 0;
    double eta = 0.0;
    int layers = 1;
    std::int64_t shots = 0;  // per leaf
    bool direct = true;
    std::vector<PlanNode> tree;  // node 0 is the root
    std::vector<PlanLeaf> leaves;

    int num_regions() const;
    std::vector<int> leaf_sizes() const;
    /// Regions per QPU name, summed over leaves.
    std::vector<std::pair<std::string, int>> regions_per_qpu() const;

    bool operator==(const ExecutionPlan&) const = default;
};

/// Usable width of a QPU at eta: the largest connected component after filtering.
struct QpuCapacity {
    std::string name;
    int usable = 0;
    std::optional<double> prior_hscore;
};

/// Fleet members ordered by priority: prior H-score descending (members
/// without a prior last), then usable width descending, then name.
std::vector<QpuCapacity> rank_fleet(const Fleet& fleet, double eta);

struct PlanOptions {
    int max_depth = 8;
    std::uint64_t seed = 0;
    MincutOptions mincut;
};

ExecutionPlan plan(const ProblemInstance& problem, const Fleet& fleet, double eta, int layers, std::int64_t shots,
                   const PlanOptions& opts = {});

struct SpeedupReport {
    double sequential = 0.0;  // every region's shots run back to back
    double parallel = 0.0;    // longest per-QPU chain of batches
    double speedup = 1.0;
    std::vector<std::pair<std::string, double>> chains;

    bool operator==(const SpeedupReport&) const = default;
};

SpeedupReport speedup_report(const ExecutionPlan& plan);

struct ExecuteOptions {
    bool noise = true;
    bool noisy_optimize = false;
    int trajectories = 64;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
};

struct RegionOutcome {
    std::string qpu;
    std::vector<int> qubits;
    std::int64_t shots = 0;
    BasisIndex best = 0;  // lowest-cost measured outcome, local leaf order
    std::int64_t best_count = 0;

    bool operator==(const RegionOutcome&) const = default;
};

struct LeafOutcome {
    std::vector<int> vertices;
    QaoaParams params;
    double expectation = 0.0;
    std::vector<RegionOutcome> regions;
    BasisIndex chosen = 0;
    double local_cost = 0.0;

    bool operator==(const LeafOutcome&) const = default;
};

struct RunResult {
    SpinAssignment assignment;
    double cost = 0.0;  // evaluate_cost of the root polynomial at `assignment`
    std::optional<double> cut;
    std::optional<double> concatenated_cut;
    std::vector<LeafOutcome> leaves;
    SpeedupReport speedup;

    bool operator==(const RunResult&) const = default;
};

RunResult execute(const ExecutionPlan& plan, const ProblemInstance& problem, const Fleet& fleet,
                  const ExecuteOptions& opts);

/// Noise-aware multi-sampling on one QPU without decomposition.
RunResult run_single_qpu(const ProblemInstance& problem, const QpuModel& qpu, double eta, int layers,
                         std::int64_t shots, const ExecuteOptions& opts);

}  // namespace qdisco
