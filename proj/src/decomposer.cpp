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

#include "qdisco/decomposer.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdisco/errors.hpp"
#include "qdisco/random.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {

std::vector<int> Partition::part_sizes() const {
    std::vector<int> sizes(capacities.size(), 0);
    for (int p : part_of) ++sizes[static_cast<std::size_t>(p)];
    return sizes;
}

std::vector<std::vector<int>> Partition::members() const {
    std::vector<std::vector<int>> out(capacities.size());
    for (std::size_t v = 0; v < part_of.size(); ++v) out[static_cast<std::size_t>(part_of[v])].push_back(static_cast<int>(v));
    return out;
}

double Partition::cut_weight() const {
    double w = 0.0;
    for (const auto& e : cut_edges) w += e.weight;
    return w;
}

Partition make_partition(const ProblemGraph& g, std::vector<int> part_of, std::vector<int> capacities) {
    if (static_cast<int>(part_of.size()) != g.num_vertices()) throw DimensionError("partition does not cover every vertex");
    Partition p;
    p.part_of = std::move(part_of);
    p.capacities = std::move(capacities);
    for (int part : p.part_of) {
        if (part < 0 || part >= p.num_parts()) throw InfeasibleError("vertex assigned to a nonexistent part");
    }
    const auto sizes = p.part_sizes();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] > p.capacities[i]) {
            throw InfeasibleError("part " + std::to_string(i) + " holds " + std::to_string(sizes[i]) +
                                  " vertices, capacity " + std::to_string(p.capacities[i]));
        }
    }
    for (const auto& e : g.edges()) {
        if (p.part_of[static_cast<std::size_t>(e.u)] != p.part_of[static_cast<std::size_t>(e.v)]) p.cut_edges.push_back(e);
    }
    return p;
}

std::vector<int> balanced_targets(int num_vertices, const std::vector<int>& capacities) {
    if (capacities.empty()) throw InfeasibleError("no capacities given");
    long total = 0;
    for (int c : capacities) {
        if (c < 1) throw InfeasibleError("capacities must be at least 1");
        total += c;
    }
    if (total < num_vertices) {
        throw InfeasibleError("capacities sum to " + std::to_string(total) + " < " + std::to_string(num_vertices) +
                              " vertices");
    }
    if (total == num_vertices) return capacities;
    // Water-fill to the lowest level that covers every vertex, then trim the excess from the back.
    int level = 0;
    auto filled = [&](int lvl) {
        long s = 0;
        for (int c : capacities) s += std::min(c, lvl);
        return s;
    };
    while (filled(level) < num_vertices) ++level;
    std::vector<int> sizes(capacities.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = std::min(capacities[i], level);
    long excess = filled(level) - num_vertices;
    for (std::size_t i = sizes.size(); i-- > 0 && excess > 0;) {
        if (sizes[i] == level) {
            --sizes[i];
            --excess;
        }
    }
    return sizes;
}

namespace {

double cut_of(const Eigen::MatrixXd& w, const std::vector<int>& part_of) {
    double cut = 0.0;
    const auto n = static_cast<Eigen::Index>(part_of.size());
    for (Eigen::Index u = 0; u < n; ++u) {
        for (Eigen::Index v = u + 1; v < n; ++v) {
            if (part_of[static_cast<std::size_t>(u)] != part_of[static_cast<std::size_t>(v)]) cut += w(u, v);
        }
    }
    return cut;
}

std::vector<int> greedy_grow(const Eigen::MatrixXd& w, const std::vector<int>& targets, Rng* rng) {
    const auto n = static_cast<int>(w.rows());
    std::vector<int> part_of(static_cast<std::size_t>(n), -1);
    const Eigen::VectorXd wdeg = w.rowwise().sum();
    for (std::size_t p = 0; p < targets.size(); ++p) {
        int size = 0;
        Eigen::VectorXd attach = Eigen::VectorXd::Zero(n);
        while (size < targets[p]) {
            int pick = -1;
            if (size == 0) {
                if (rng) {
                    std::vector<int> free;
                    for (int v = 0; v < n; ++v) {
                        if (part_of[static_cast<std::size_t>(v)] < 0) free.push_back(v);
                    }
                    pick = free[uniform_below(*rng, free.size())];
                } else {
                    for (int v = 0; v < n; ++v) {
                        if (part_of[static_cast<std::size_t>(v)] < 0 && (pick < 0 || wdeg[v] > wdeg[pick])) pick = v;
                    }
                }
            } else {
                for (int v = 0; v < n; ++v) {
                    if (part_of[static_cast<std::size_t>(v)] >= 0) continue;
                    if (pick < 0 || attach[v] > attach[pick]) pick = v;
                }
            }
            part_of[static_cast<std::size_t>(pick)] = static_cast<int>(p);
            attach += w.col(pick);
            ++size;
        }
    }
    return part_of;
}

// One Kernighan-Lin pass over all part pairs: tentatively apply the best swap,
// lock both vertices, repeat, then keep the best prefix. Returns the gain kept.
double kl_pass(const Eigen::MatrixXd& w, std::vector<int>& part_of, int num_parts) {
    const auto n = static_cast<int>(part_of.size());
    // conn(v, p): total weight from v into part p.
    Eigen::MatrixXd conn = Eigen::MatrixXd::Zero(n, num_parts);
    for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) conn(v, part_of[static_cast<std::size_t>(u)]) += w(v, u);
    }
    std::vector<char> locked(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<int, int>> moves;
    double running = 0.0, best = 0.0;
    std::size_t best_len = 0;
    for (int step = 0; step < n / 2; ++step) {
        double best_gain = -std::numeric_limits<double>::infinity();
        int bu = -1, bv = -1;
        for (int u = 0; u < n; ++u) {
            if (locked[static_cast<std::size_t>(u)]) continue;
            const int pu = part_of[static_cast<std::size_t>(u)];
            for (int v = u + 1; v < n; ++v) {
                const int pv = part_of[static_cast<std::size_t>(v)];
                if (locked[static_cast<std::size_t>(v)] || pv == pu) continue;
                const double gain = conn(u, pv) - conn(u, pu) + conn(v, pu) - conn(v, pv) - 2.0 * w(u, v);
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    bu = u;
                    bv = v;
                }
            }
        }
        if (bu < 0) break;
        const int pu = part_of[static_cast<std::size_t>(bu)], pv = part_of[static_cast<std::size_t>(bv)];
        for (int x = 0; x < n; ++x) {
            conn(x, pu) += w(x, bv) - w(x, bu);
            conn(x, pv) += w(x, bu) - w(x, bv);
        }
        part_of[static_cast<std::size_t>(bu)] = pv;
        part_of[static_cast<std::size_t>(bv)] = pu;
        locked[static_cast<std::size_t>(bu)] = locked[static_cast<std::size_t>(bv)] = 1;
        moves.emplace_back(bu, bv);
        running += best_gain;
        if (running > best + 1e-12) {
            best = running;
            best_len = moves.size();
        }
    }
    for (std::size_t i = moves.size(); i-- > best_len;) std::swap(part_of[static_cast<std::size_t>(moves[i].first)], part_of[static_cast<std::size_t>(moves[i].second)]);
    return best;
}

}  // namespace

Partition balanced_mincut(const ProblemGraph& g, const std::vector<int>& capacities, const MincutOptions& opts) {
    const auto targets = balanced_targets(g.num_vertices(), capacities);
    const int n = g.num_vertices();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        w(e.u, e.v) = e.weight;
        w(e.v, e.u) = e.weight;
    }
    std::vector<int> best_assignment;
    double best_cut = std::numeric_limits<double>::infinity();
    const int restarts = std::max(1, opts.restarts);
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(opts.seed, streams::kPartition, static_cast<std::uint64_t>(r)));
        auto assignment = greedy_grow(w, targets, r == 0 ? nullptr : &rng);
        for (int pass = 0; pass < opts.max_passes; ++pass) {
            if (kl_pass(w, assignment, static_cast<int>(targets.size())) <= 1e-12) break;
        }
        const double cut = cut_of(w, assignment);
        if (cut < best_cut - 1e-12) {
            best_cut = cut;
            best_assignment = std::move(assignment);
        }
    }
    return make_partition(g, std::move(best_assignment), capacities);
}

std::vector<Subproblem> extract_subproblems(const ProblemGraph& g, const Partition& partition) {
    const auto members = partition.members();
    std::vector<int> local(static_cast<std::size_t>(g.num_vertices()), -1);
    for (const auto& m : members) {
        for (std::size_t i = 0; i < m.size(); ++i) local[static_cast<std::size_t>(m[i])] = static_cast<int>(i);
    }
    std::vector<std::vector<WeightedEdge>> edges(members.size());
    for (const auto& e : g.edges()) {
        const int pu = partition.part_of[static_cast<std::size_t>(e.u)];
        if (pu == partition.part_of[static_cast<std::size_t>(e.v)]) {
            edges[static_cast<std::size_t>(pu)].push_back(
                WeightedEdge{local[static_cast<std::size_t>(e.u)], local[static_cast<std::size_t>(e.v)], e.weight});
        }
    }
    std::vector<Subproblem> out;
    out.reserve(members.size());
    for (std::size_t p = 0; p < members.size(); ++p) {
        out.push_back(Subproblem{ProblemGraph(static_cast<int>(members[p].size()), std::move(edges[p])), members[p]});
    }
    return out;
}

namespace {

void check_locals(const Partition& partition, const std::vector<SpinAssignment>& locals) {
    if (static_cast<int>(locals.size()) != partition.num_parts()) {
        throw DimensionError("expected " + std::to_string(partition.num_parts()) + " local solutions, got " +
                             std::to_string(locals.size()));
    }
    const auto sizes = partition.part_sizes();
    for (std::size_t p = 0; p < locals.size(); ++p) {
        if (locals[p].size() != sizes[p]) throw DimensionError("local solution " + std::to_string(p) + " has wrong width");
    }
}

}  // namespace

SpinAssignment concatenate_solutions(const ProblemGraph& g, const Partition& partition,
                                     const std::vector<SpinAssignment>& local_solutions) {
    check_locals(partition, local_solutions);
    const auto members = partition.members();
    std::vector<int> values(static_cast<std::size_t>(g.num_vertices()), 1);
    for (std::size_t p = 0; p < members.size(); ++p) {
        for (std::size_t i = 0; i < members[p].size(); ++i) {
            values[static_cast<std::size_t>(members[p][i])] = local_solutions[p][static_cast<int>(i)];
        }
    }
    return SpinAssignment(std::move(values));
}

ProblemGraph build_merge_problem(const ProblemGraph& g, const Partition& partition,
                                 const std::vector<SpinAssignment>& local_solutions) {
    const SpinAssignment s = concatenate_solutions(g, partition, local_solutions);
    const int parts = partition.num_parts();
    Eigen::MatrixXd coarse = Eigen::MatrixXd::Zero(parts, parts);
    for (const auto& e : partition.cut_edges) {
        int a = partition.part_of[static_cast<std::size_t>(e.u)];
        int b = partition.part_of[static_cast<std::size_t>(e.v)];
        if (a > b) std::swap(a, b);
        coarse(a, b) += e.weight * s[e.u] * s[e.v];
    }
    std::vector<WeightedEdge> edges;
    for (int a = 0; a < parts; ++a) {
        for (int b = a + 1; b < parts; ++b) {
            if (coarse(a, b) != 0.0) edges.push_back(WeightedEdge{a, b, coarse(a, b)});
        }
    }
    return ProblemGraph(parts, std::move(edges));
}

namespace {

// Flips minimizing sum_ab W_ab z_a z_b with z_0 = +1; all-unflipped wins ties.
std::vector<int> exact_flips(const ProblemGraph& coarse) {
    const int parts = coarse.num_vertices();
    const SpinPolynomial poly = maxcut_to_spin_polynomial(coarse);
    const BasisIndex limit = BasisIndex{1} << (parts - 1);
    BasisIndex best = 0;
    double best_value = evaluate_cost(poly, BasisIndex{0});
    for (BasisIndex b = 1; b < limit; ++b) {
        const double v = evaluate_cost(poly, b << 1);
        if (v < best_value - 1e-12) {
            best_value = v;
            best = b;
        }
    }
    return SpinAssignment::from_index(best << 1, parts).values();
}

// Larger merge problems: p = 1 QAOA over a coarse angle grid, best sampled
// outcome, then single-flip descent.
std::vector<int> qaoa_flips(const ProblemGraph& coarse, std::uint64_t seed) {
    const int parts = coarse.num_vertices();
    if (parts > kMaxDenseSpins) {
        throw CapacityError("merge problem over " + std::to_string(parts) + " parts exceeds " +
                            std::to_string(kMaxDenseSpins));
    }
    const SpinPolynomial poly = maxcut_to_spin_polynomial(coarse);
    const QaoaObjective objective(poly);
    QaoaParams best_params{{0.0}, {0.0}};
    double best_e = std::numeric_limits<double>::infinity();
    constexpr int kGrid = 12;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const QaoaParams params{{2.0 * M_PI * i / kGrid}, {M_PI * j / kGrid}};
            const double e = objective(params);
            if (e < best_e) {
                best_e = e;
                best_params = params;
            }
        }
    }
    const auto counts = sample(objective.state(best_params), 1024, derive_seed(seed, streams::kMerge));
    BasisIndex best = 0;
    double best_value = evaluate_cost(poly, BasisIndex{0});
    for (const auto& [b, c] : counts.counts()) {
        const double v = objective.diagonal()[static_cast<Eigen::Index>(b)];
        if (v < best_value - 1e-12) {
            best_value = v;
            best = b;
        }
    }
    for (bool improved = true; improved;) {
        improved = false;
        for (int a = 0; a < parts; ++a) {
            const BasisIndex cand = best ^ (BasisIndex{1} << a);
            const double v = objective.diagonal()[static_cast<Eigen::Index>(cand)];
            if (v < best_value - 1e-12) {
                best_value = v;
                best = cand;
                improved = true;
            }
        }
    }
    return SpinAssignment::from_index(best, parts).values();
}

}  // namespace

SpinAssignment merge_solutions(const ProblemGraph& g, const Partition& partition,
                               const std::vector<SpinAssignment>& local_solutions, const MergeOptions& opts) {
    const SpinAssignment base = concatenate_solutions(g, partition, local_solutions);
    if (partition.num_parts() == 1) return base;
    const ProblemGraph coarse = build_merge_problem(g, partition, local_solutions);
    const auto flips = partition.num_parts() <= opts.brute_force_limit ? exact_flips(coarse)
                                                                        : qaoa_flips(coarse, opts.seed);
    std::vector<int> values = base.values();
    for (std::size_t v = 0; v < values.size(); ++v) values[v] *= flips[static_cast<std::size_t>(partition.part_of[v])];
    SpinAssignment merged(std::move(values));
    return cut_value(g, merged) >= cut_value(g, base) ? merged : base;
}

}  // namespace qdisco
