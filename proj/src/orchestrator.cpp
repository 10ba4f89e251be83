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

#include "qdisco/orchestrator.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qdisco/errors.hpp"
#include "qdisco/random.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {

int PlanLeaf::num_regions() const {
    int r = 0;
    for (const auto& a : assignments) r += static_cast<int>(a.regions.size());
    return r;
}

int ExecutionPlan::num_regions() const {
    int r = 0;
    for (const auto& leaf : leaves) r += leaf.num_regions();
    return r;
}

std::vector<int> ExecutionPlan::leaf_sizes() const {
    std::vector<int> sizes;
    for (const auto& leaf : leaves) sizes.push_back(leaf.size());
    return sizes;
}

std::vector<std::pair<std::string, int>> ExecutionPlan::regions_per_qpu() const {
    std::map<std::string, int> per;
    for (const auto& leaf : leaves) {
        for (const auto& a : leaf.assignments) per[a.qpu] += static_cast<int>(a.regions.size());
    }
    return {per.begin(), per.end()};
}

std::vector<QpuCapacity> rank_fleet(const Fleet& fleet, double eta) {
    std::vector<QpuCapacity> out;
    for (const auto& m : fleet.members()) {
        out.push_back(QpuCapacity{m.qpu.name(), filter_by_threshold(m.qpu, eta).largest_component(), m.prior_hscore});
    }
    std::stable_sort(out.begin(), out.end(), [](const QpuCapacity& a, const QpuCapacity& b) {
        if (a.prior_hscore.has_value() != b.prior_hscore.has_value()) return a.prior_hscore.has_value();
        if (a.prior_hscore && *a.prior_hscore != *b.prior_hscore) return *a.prior_hscore > *b.prior_hscore;
        if (a.usable != b.usable) return a.usable > b.usable;
        return a.name < b.name;
    });
    return out;
}

namespace {

ProblemGraph induced(const ProblemGraph& g, const std::vector<int>& vertices) {
    std::vector<int> local(static_cast<std::size_t>(g.num_vertices()), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
    std::vector<WeightedEdge> edges;
    for (const auto& e : g.edges()) {
        const int a = local[static_cast<std::size_t>(e.u)], b = local[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0) edges.push_back(WeightedEdge{a, b, e.weight});
    }
    return ProblemGraph(static_cast<int>(vertices.size()), std::move(edges));
}

// As many disjoint regions of the given width as the filtered QPU holds.
std::vector<SamplingRegion> regions_for(const QpuModel& qpu, double eta, int width, std::uint64_t seed) {
    const FilteredGraph fg = filter_by_threshold(qpu, eta);
    EnumerateOptions eopts;
    eopts.seed = derive_seed(seed, streams::kRegions);
    const int k = std::max(1, static_cast<int>(fg.qubits.size()) / width);
    return select_regions(enumerate_regions(fg, width, eopts), k);
}

std::vector<std::int64_t> split_shots(std::int64_t shots, std::size_t regions) {
    std::vector<std::int64_t> out(regions, shots / static_cast<std::int64_t>(regions));
    for (std::size_t r = 0; r < static_cast<std::size_t>(shots % static_cast<std::int64_t>(regions)); ++r) ++out[r];
    return out;
}

class Planner {
   public:
    Planner(const ProblemGraph& g, const std::vector<QpuCapacity>& ranked, const PlanOptions& opts)
        : g_(g), ranked_(ranked), opts_(opts) {
        for (const auto& q : ranked_) max_cap_ = std::max(max_cap_, q.usable);
    }

    void split(int node, std::vector<PlanNode>& tree) {
        const std::vector<int> vertices = tree[static_cast<std::size_t>(node)].vertices;
        const int depth = tree[static_cast<std::size_t>(node)].depth;
        if (static_cast<int>(vertices.size()) <= max_cap_) return;
        if (depth >= opts_.max_depth) {
            throw CapacityError("subproblem of " + std::to_string(vertices.size()) + " vertices still exceeds the widest usable region (" +
                                std::to_string(max_cap_) + " qubits) at depth " + std::to_string(depth));
        }
        // Fewest QPUs in priority order (cycling when the fleet is exhausted) whose widths cover the node.
        std::vector<int> caps;
        long total = 0;
        for (std::size_t i = 0; total < static_cast<long>(vertices.size()); i = (i + 1) % ranked_.size()) {
            if (ranked_[i].usable < 1) continue;
            caps.push_back(ranked_[i].usable);
            total += ranked_[i].usable;
        }
        MincutOptions mopts = opts_.mincut;
        mopts.seed = derive_seed(opts_.seed, streams::kPartition, static_cast<std::uint64_t>(node));
        const Partition part = balanced_mincut(induced(g_, vertices), caps, mopts);
        for (const auto& members : part.members()) {
            if (members.empty()) continue;
            PlanNode child;
            for (int m : members) child.vertices.push_back(vertices[static_cast<std::size_t>(m)]);
            child.depth = depth + 1;
            tree.push_back(std::move(child));
            const int idx = static_cast<int>(tree.size()) - 1;
            tree[static_cast<std::size_t>(node)].children.push_back(idx);
            split(idx, tree);
        }
    }

   private:
    const ProblemGraph& g_;
    const std::vector<QpuCapacity>& ranked_;
    const PlanOptions& opts_;
    int max_cap_ = 0;
};

}  // namespace

ExecutionPlan plan(const ProblemInstance& problem, const Fleet& fleet, double eta, int layers, std::int64_t shots,
                   const PlanOptions& opts) {
    if (fleet.empty()) throw InvalidSizeError("fleet is empty");
    if (layers < 1) throw InvalidSizeError("layers must be at least 1");
    if (shots < 1) throw RangeError("shots must be positive");
    const int n = problem.num_spins();
    const auto ranked = rank_fleet(fleet, eta);

    ExecutionPlan out;
    out.num_vertices = n;
    out.eta = eta;
    out.layers = layers;
    out.shots = shots;
    PlanNode root;
    root.vertices.resize(static_cast<std::size_t>(n));
    std::iota(root.vertices.begin(), root.vertices.end(), 0);
    out.tree.push_back(root);

    const int widest = ranked.empty() ? 0 : std::max_element(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                                                return a.usable < b.usable;
                                            })->usable;
    if (n <= widest) {
        // Direct execution: every QPU wide enough hosts as many copies as fit.
        PlanLeaf leaf;
        leaf.node = 0;
        leaf.vertices = root.vertices;
        for (const auto& q : ranked) {
            if (q.usable < n) continue;
            LeafAssignment a;
            a.qpu = q.name;
            a.regions = regions_for(fleet.find(q.name)->qpu, eta, n, opts.seed);
            leaf.assignments.push_back(std::move(a));
        }
        std::size_t total = 0;
        for (const auto& a : leaf.assignments) total += a.regions.size();
        const auto split = split_shots(shots, total);
        std::size_t r = 0;
        for (auto& a : leaf.assignments) {
            for (std::size_t i = 0; i < a.regions.size(); ++i) a.shots.push_back(split[r++]);
        }
        out.leaves.push_back(std::move(leaf));
        return out;
    }

    if (!problem.graph) {
        throw CapacityError("problem needs " + std::to_string(n) + " qubits; widest usable region at eta " +
                            std::to_string(eta) + " has " + std::to_string(widest) + " and only graph problems decompose");
    }
    if (widest < 1) throw CapacityError("no QPU has a usable qubit at eta " + std::to_string(eta));

    out.direct = false;
    Planner(*problem.graph, ranked, opts).split(0, out.tree);

    std::vector<int> leaf_nodes;
    for (std::size_t i = 0; i < out.tree.size(); ++i) {
        if (out.tree[i].children.empty()) leaf_nodes.push_back(static_cast<int>(i));
    }
    // Larger leaves first, each to the least-loaded QPU that fits it (ties: priority).
    std::stable_sort(leaf_nodes.begin(), leaf_nodes.end(), [&](int a, int b) {
        return out.tree[static_cast<std::size_t>(a)].vertices.size() > out.tree[static_cast<std::size_t>(b)].vertices.size();
    });
    std::vector<int> load(ranked.size(), 0);
    for (int node : leaf_nodes) {
        const auto& vertices = out.tree[static_cast<std::size_t>(node)].vertices;
        const int width = static_cast<int>(vertices.size());
        std::size_t pick = ranked.size();
        for (std::size_t q = 0; q < ranked.size(); ++q) {
            if (ranked[q].usable < width) continue;
            if (pick == ranked.size() || load[q] < load[pick]) pick = q;
        }
        ++load[pick];
        PlanLeaf leaf;
        leaf.node = node;
        leaf.vertices = vertices;
        LeafAssignment a;
        a.qpu = ranked[pick].name;
        a.regions = regions_for(fleet.find(a.qpu)->qpu, eta, width, opts.seed);
        a.shots = split_shots(shots, a.regions.size());
        leaf.assignments.push_back(std::move(a));
        out.leaves.push_back(std::move(leaf));
    }
    return out;
}

SpeedupReport speedup_report(const ExecutionPlan& plan) {
    SpeedupReport report;
    std::map<std::string, double> chains;
    for (const auto& leaf : plan.leaves) {
        for (const auto& a : leaf.assignments) {
            std::int64_t longest = 0;
            for (std::int64_t s : a.shots) {
                report.sequential += static_cast<double>(s);
                longest = std::max(longest, s);
            }
            chains[a.qpu] += static_cast<double>(longest);
        }
    }
    for (const auto& [name, t] : chains) report.parallel = std::max(report.parallel, t);
    report.chains.assign(chains.begin(), chains.end());
    report.speedup = report.parallel > 0.0 ? report.sequential / report.parallel : 1.0;
    return report;
}

namespace {

struct Candidate {
    BasisIndex outcome = 0;
    int votes = 0;
    std::int64_t count = 0;
    double cost = 0.0;
};

LeafOutcome run_leaf(const PlanLeaf& leaf, const SpinPolynomial& poly, int layers, const Fleet& fleet,
                     const ExecuteOptions& opts, std::uint64_t leaf_seed) {
    LeafOutcome out;
    out.vertices = leaf.vertices;
    const QaoaObjective objective(poly);

    struct Target {
        const QpuModel* qpu;
        Placement placement;
        std::int64_t shots;
    };
    std::vector<Target> targets;
    for (const auto& a : leaf.assignments) {
        const FleetMember* member = fleet.find(a.qpu);
        if (!member) throw PlacementError("plan references unknown QPU '" + a.qpu + "'");
        for (std::size_t r = 0; r < a.regions.size(); ++r) {
            targets.push_back(Target{&member->qpu, map_circuit(poly, a.regions[r]), a.shots[r]});
        }
    }
    if (targets.empty()) throw PlacementError("leaf has no sampling region");
    auto noise_for = [&](const QpuModel& qpu) {
        return opts.noise ? NoiseSpec::from_qpu(qpu, opts.trajectories) : NoiseSpec::noiseless(qpu, opts.trajectories);
    };

    OptimizerConfig cfg = opts.optimizer;
    cfg.seed = derive_seed(leaf_seed, streams::kOptimizerInit);
    OptimizationTrace trace;
    if (opts.noisy_optimize) {
        cfg.noisy = true;
        const Target& t = targets.front();
        const NoiseSpec noise = noise_for(*t.qpu);
        std::uint64_t calls = 0;
        trace = optimize(layers,
                         [&](const QaoaParams& params) {
                             const auto counts = noisy_sample(poly, params, t.placement, *t.qpu, noise, 256,
                                                              derive_seed(leaf_seed, streams::kTrajectory, calls++));
                             double mean = 0.0;
                             for (const auto& [b, c] : counts.counts()) {
                                 mean += objective.diagonal()[static_cast<Eigen::Index>(b)] * static_cast<double>(c);
                             }
                             return mean / static_cast<double>(counts.total());
                         },
                         cfg);
    } else {
        trace = optimize(poly, layers, cfg);
    }
    if (!trace.ok()) throw Error("angle optimization failed: " + *trace.error);
    out.params = trace.best_params;
    out.expectation = objective(out.params);

    std::vector<Candidate> candidates;
    std::map<BasisIndex, std::int64_t> aggregate;
    for (std::size_t r = 0; r < targets.size(); ++r) {
        const Target& t = targets[r];
        if (t.shots < 1) continue;
        const auto counts = noisy_sample(poly, out.params, t.placement, *t.qpu, noise_for(*t.qpu), t.shots,
                                         derive_seed(leaf_seed, streams::kSample, r));
        RegionOutcome region{t.qpu->name(), t.placement.region.qubits, t.shots, 0, 0};
        double best_cost = std::numeric_limits<double>::infinity();
        for (const auto& [b, c] : counts.counts()) {
            aggregate[b] += c;
            const double cost = objective.diagonal()[static_cast<Eigen::Index>(b)];
            if (cost < best_cost - 1e-12 || (cost <= best_cost + 1e-12 && c > region.best_count)) {
                best_cost = cost;
                region.best = b;
                region.best_count = c;
            }
        }
        auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Candidate& c) { return c.outcome == region.best; });
        if (it == candidates.end()) {
            candidates.push_back(Candidate{region.best, 1, 0, best_cost});
        } else {
            ++it->votes;
        }
        out.regions.push_back(std::move(region));
    }
    if (candidates.empty()) throw RangeError("leaf received no shots");
    for (auto& c : candidates) c.count = aggregate[c.outcome];
    // Majority of region bests; ties go to the larger aggregate count, then lower cost, then lower index.
    const auto best = std::min_element(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.count != b.count) return a.count > b.count;
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.outcome < b.outcome;
    });
    out.chosen = best->outcome;
    out.local_cost = best->cost;
    return out;
}

}  // namespace

RunResult execute(const ExecutionPlan& plan, const ProblemInstance& problem, const Fleet& fleet,
                  const ExecuteOptions& opts) {
    if (plan.num_vertices != problem.num_spins()) throw DimensionError("plan and problem sizes differ");
    if (plan.leaves.empty()) throw PlacementError("plan has no leaves");
    RunResult result;
    for (std::size_t i = 0; i < plan.leaves.size(); ++i) {
        const PlanLeaf& leaf = plan.leaves[i];
        const SpinPolynomial poly =
            problem.graph ? maxcut_to_spin_polynomial(induced(*problem.graph, leaf.vertices)) : problem.polynomial();
        result.leaves.push_back(run_leaf(leaf, poly, plan.layers, fleet, opts, derive_seed(opts.seed, streams::kLeaf, i)));
    }

    if (result.leaves.size() == 1) {
        result.assignment = SpinAssignment::from_index(result.leaves.front().chosen, plan.num_vertices);
    } else {
        const ProblemGraph& g = *problem.graph;
        std::vector<int> part_of(static_cast<std::size_t>(plan.num_vertices), -1);
        std::vector<int> capacities;
        std::vector<SpinAssignment> locals;
        for (std::size_t i = 0; i < result.leaves.size(); ++i) {
            const auto& leaf = result.leaves[i];
            for (int v : leaf.vertices) part_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
            capacities.push_back(static_cast<int>(leaf.vertices.size()));
            locals.push_back(SpinAssignment::from_index(leaf.chosen, static_cast<int>(leaf.vertices.size())));
        }
        const Partition partition = make_partition(g, std::move(part_of), std::move(capacities));
        result.concatenated_cut = cut_value(g, concatenate_solutions(g, partition, locals));
        MergeOptions mopts;
        mopts.seed = derive_seed(opts.seed, streams::kMerge);
        result.assignment = merge_solutions(g, partition, locals, mopts);
    }
    result.cost = evaluate_cost(problem.polynomial(), result.assignment);
    if (problem.graph) {
        result.cut = cut_value(*problem.graph, result.assignment);
        if (!result.concatenated_cut) result.concatenated_cut = result.cut;
    }
    result.speedup = speedup_report(plan);
    return result;
}

RunResult run_single_qpu(const ProblemInstance& problem, const QpuModel& qpu, double eta, int layers,
                         std::int64_t shots, const ExecuteOptions& opts) {
    const Fleet fleet({FleetMember{qpu, std::nullopt}});
    PlanOptions popts;
    popts.seed = opts.seed;
    const ExecutionPlan p = plan(problem, fleet, eta, layers, shots, popts);
    if (!p.direct) {
        throw CapacityError("problem needs " + std::to_string(problem.num_spins()) + " qubits, more than QPU '" +
                            qpu.name() + "' offers at eta " + std::to_string(eta));
    }
    return execute(p, problem, fleet, opts);
}

}  // namespace qdisco
