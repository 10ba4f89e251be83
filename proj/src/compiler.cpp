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

#include "qdisco/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "qdisco/errors.hpp"
#include "qdisco/random.hpp"

namespace qdisco {

// ---------------------------------------------------------------------------
// Step 1: threshold filtering

int FilteredGraph::largest_component() const {
    std::vector<char> seen(valid.size(), 0);
    int best = 0;
    for (int start : qubits) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        int size = 0;
        std::vector<int> stack{start};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            ++size;
            for (int r : adjacency[static_cast<std::size_t>(q)]) {
                if (!seen[static_cast<std::size_t>(r)]) {
                    seen[static_cast<std::size_t>(r)] = 1;
                    stack.push_back(r);
                }
            }
        }
        best = std::max(best, size);
    }
    return best;
}

FilteredGraph filter_by_threshold(const QpuModel& qpu, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw RangeError("eta must lie in (0, 1], got " + std::to_string(eta));
    FilteredGraph fg;
    fg.parent = qpu;
    fg.eta = eta;
    const int n = qpu.num_qubits();
    fg.valid.assign(static_cast<std::size_t>(n), 0);
    fg.adjacency.assign(static_cast<std::size_t>(n), {});
    for (int q = 0; q < n; ++q) {
        ++fg.predicate_evaluations;
        if (qpu.readout_error(q) < eta) {
            fg.valid[static_cast<std::size_t>(q)] = 1;
            fg.qubits.push_back(q);
        }
    }
    for (const auto& c : qpu.couplings()) {
        ++fg.predicate_evaluations;
        const bool gate_ok = c.gate_error < eta;
        if (gate_ok && fg.valid[static_cast<std::size_t>(c.u)] && fg.valid[static_cast<std::size_t>(c.v)]) {
            fg.couplings.push_back(c);
            fg.adjacency[static_cast<std::size_t>(c.u)].push_back(c.v);
            fg.adjacency[static_cast<std::size_t>(c.v)].push_back(c.u);
        }
    }
    for (auto& adj : fg.adjacency) std::sort(adj.begin(), adj.end());
    return fg;
}

// ---------------------------------------------------------------------------
// Step 2: region enumeration and selection

double region_fidelity(std::span<const int> qubits, std::span<const Coupling> couplings, const QpuModel& qpu) {
    double f = 1.0;
    for (int q : qubits) f *= 1.0 - qpu.readout_error(q);
    for (const auto& c : couplings) f *= 1.0 - qpu.gate_error(c.u, c.v);
    return f;
}

namespace {

SamplingRegion make_region(std::vector<int> qubits, const FilteredGraph& fg) {
    std::sort(qubits.begin(), qubits.end());
    SamplingRegion r;
    for (const auto& c : fg.couplings) {
        if (std::binary_search(qubits.begin(), qubits.end(), c.u) &&
            std::binary_search(qubits.begin(), qubits.end(), c.v)) {
            r.couplings.push_back(c);
        }
    }
    r.qubits = std::move(qubits);
    r.fidelity = region_fidelity(r.qubits, r.couplings, fg.parent);
    return r;
}

// ESU enumeration (each connected induced subgraph reached exactly once) on a
// dense relabelling of the filtered graph.
class Esu {
   public:
    Esu(const std::vector<std::vector<int>>& adj, int k, std::size_t cap) : adj_(adj), k_(k), cap_(cap) {}

    std::vector<std::vector<int>> run() {
        const int m = static_cast<int>(adj_.size());
        near_sub_.assign(static_cast<std::size_t>(m), 0);
        for (int v = 0; v < m; ++v) {
            std::vector<int> ext;
            for (int u : adj_[static_cast<std::size_t>(v)]) {
                if (u > v) ext.push_back(u);
            }
            sub_.assign(1, v);
            mark(v, +1);
            extend(ext, v);
            mark(v, -1);
        }
        return std::move(out_);
    }

   private:
    // near_sub_[u] counts members of sub_ that are u itself or adjacent to u.
    void mark(int w, int delta) {
        near_sub_[static_cast<std::size_t>(w)] += delta;
        for (int u : adj_[static_cast<std::size_t>(w)]) near_sub_[static_cast<std::size_t>(u)] += delta;
    }

    void extend(std::vector<int> ext, int root) {
        if (static_cast<int>(sub_.size()) == k_) {
            if (out_.size() >= cap_) {
                throw CapacityError("region enumeration exceeded " + std::to_string(cap_) + " candidates");
            }
            out_.push_back(sub_);
            return;
        }
        while (!ext.empty()) {
            const int w = ext.back();
            ext.pop_back();
            std::vector<int> next = ext;
            for (int u : adj_[static_cast<std::size_t>(w)]) {
                if (u > root && near_sub_[static_cast<std::size_t>(u)] == 0) next.push_back(u);
            }
            sub_.push_back(w);
            mark(w, +1);
            extend(std::move(next), root);
            mark(w, -1);
            sub_.pop_back();
        }
    }

    const std::vector<std::vector<int>>& adj_;
    int k_;
    std::size_t cap_;
    std::vector<int> sub_;
    std::vector<int> near_sub_;
    std::vector<std::vector<int>> out_;
};

}  // namespace

std::vector<SamplingRegion> enumerate_regions(const FilteredGraph& fg, int n, const EnumerateOptions& opts) {
    if (n < 1) throw InvalidSizeError("region size must be at least 1");
    const int m = static_cast<int>(fg.qubits.size());
    if (n > m) {
        throw NoRegionError("need " + std::to_string(n) + " qubits but only " + std::to_string(m) + " of " +
                            fg.parent.name() + " pass eta = " + std::to_string(fg.eta));
    }
    // Dense relabelling: local i <-> fg.qubits[i].
    std::vector<int> local(fg.valid.size(), -1);
    for (int i = 0; i < m; ++i) local[static_cast<std::size_t>(fg.qubits[static_cast<std::size_t>(i)])] = i;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int r : fg.adjacency[static_cast<std::size_t>(fg.qubits[static_cast<std::size_t>(i)])]) {
            adj[static_cast<std::size_t>(i)].push_back(local[static_cast<std::size_t>(r)]);
        }
    }

    std::set<std::vector<int>> found;
    if (m <= opts.exact_limit) {
        for (auto& sub : Esu(adj, n, opts.max_regions).run()) {
            for (int& v : sub) v = fg.qubits[static_cast<std::size_t>(v)];
            std::sort(sub.begin(), sub.end());
            found.insert(std::move(sub));
        }
    } else {
        // Random growth from every surviving qubit: repeatedly absorb a uniformly
        // chosen frontier qubit until the region reaches n or gets stuck.
        Rng rng(derive_seed(opts.seed, streams::kRegions));
        const std::size_t attempts =
            std::max(opts.attempts_per_qubit * static_cast<std::size_t>(m), 4 * opts.min_candidates);
        for (std::size_t a = 0; a < attempts; ++a) {
            const int start = static_cast<int>(a % static_cast<std::size_t>(m));
            std::vector<int> members{start};
            std::vector<char> in(static_cast<std::size_t>(m), 0);
            in[static_cast<std::size_t>(start)] = 1;
            std::vector<int> frontier;
            auto push_frontier = [&](int v) {
                for (int u : adj[static_cast<std::size_t>(v)]) {
                    if (!in[static_cast<std::size_t>(u)] &&
                        std::find(frontier.begin(), frontier.end(), u) == frontier.end()) {
                        frontier.push_back(u);
                    }
                }
            };
            push_frontier(start);
            while (static_cast<int>(members.size()) < n && !frontier.empty()) {
                const auto pick = static_cast<std::size_t>(uniform_below(rng, frontier.size()));
                const int v = frontier[pick];
                frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
                in[static_cast<std::size_t>(v)] = 1;
                members.push_back(v);
                push_frontier(v);
            }
            if (static_cast<int>(members.size()) != n) continue;
            for (int& v : members) v = fg.qubits[static_cast<std::size_t>(v)];
            std::sort(members.begin(), members.end());
            found.insert(std::move(members));
        }
    }
    if (found.empty()) {
        throw NoRegionError("no connected " + std::to_string(n) + "-qubit region on " + fg.parent.name() +
                            " at eta = " + std::to_string(fg.eta));
    }
    std::vector<SamplingRegion> regions;
    regions.reserve(found.size());
    for (const auto& q : found) regions.push_back(make_region(q, fg));
    return regions;
}

SelectionScore selection_score(std::span<const SamplingRegion> regions) {
    SelectionScore s;
    s.count = regions.size();
    for (const auto& r : regions) s.total_fidelity += r.fidelity;
    return s;
}

namespace {

constexpr double kScoreTol = 1e-12;

bool better(const SelectionScore& a, const SelectionScore& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.total_fidelity > b.total_fidelity + kScoreTol;
}

class DisjointSearch {
   public:
    DisjointSearch(const std::vector<SamplingRegion>& cands, int k, std::size_t budget)
        : cands_(cands), k_(static_cast<std::size_t>(k)), budget_(budget) {
        int max_q = 0;
        for (const auto& c : cands_) max_q = std::max(max_q, c.qubits.back());
        words_ = static_cast<std::size_t>(max_q) / 64 + 1;
        masks_.assign(cands_.size() * words_, 0);
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            for (int q : cands_[i].qubits) masks_[i * words_ + static_cast<std::size_t>(q) / 64] |= 1ULL << (q % 64);
        }
        prefix_.assign(cands_.size() + 1, 0.0);
        for (std::size_t i = 0; i < cands_.size(); ++i) prefix_[i + 1] = prefix_[i] + cands_[i].fidelity;
    }

    std::vector<std::size_t> run() {
        greedy();
        used_.assign(words_, 0);
        chosen_.clear();
        dfs(0, 0.0);
        return best_;
    }

   private:
    bool disjoint(std::size_t i) const {
        for (std::size_t w = 0; w < words_; ++w) {
            if (masks_[i * words_ + w] & used_[w]) return false;
        }
        return true;
    }
    void toggle(std::size_t i) {
        for (std::size_t w = 0; w < words_; ++w) used_[w] ^= masks_[i * words_ + w];
    }

    void greedy() {
        used_.assign(words_, 0);
        for (std::size_t i = 0; i < cands_.size() && best_.size() < k_; ++i) {
            if (disjoint(i)) {
                toggle(i);
                best_.push_back(i);
                best_score_.count++;
                best_score_.total_fidelity += cands_[i].fidelity;
            }
        }
    }

    void dfs(std::size_t start, double sum) {
        if (++nodes_ > budget_) return;
        const SelectionScore here{chosen_.size(), sum};
        if (better(here, best_score_)) {
            best_score_ = here;
            best_ = chosen_;
        }
        if (chosen_.size() == k_) return;
        const std::size_t room = k_ - chosen_.size();
        for (std::size_t i = start; i < cands_.size(); ++i) {
            // Candidates are sorted by fidelity, so the next `room` entries bound what is reachable.
            const std::size_t reach = std::min(room, cands_.size() - i);
            const SelectionScore bound{chosen_.size() + reach, sum + prefix_[i + reach] - prefix_[i]};
            if (!better(bound, best_score_)) return;
            if (!disjoint(i)) continue;
            toggle(i);
            chosen_.push_back(i);
            dfs(i + 1, sum + cands_[i].fidelity);
            chosen_.pop_back();
            toggle(i);
            if (nodes_ > budget_) return;
        }
    }

    const std::vector<SamplingRegion>& cands_;
    std::size_t k_;
    std::size_t budget_;
    std::size_t words_ = 1;
    std::vector<std::uint64_t> masks_;
    std::vector<double> prefix_;
    std::vector<std::uint64_t> used_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> best_;
    SelectionScore best_score_;
    std::size_t nodes_ = 0;
};

std::vector<SamplingRegion> select_within(const std::vector<SamplingRegion>& ranked, int k, std::size_t budget) {
    DisjointSearch search(ranked, k, budget);
    auto picks = search.run();
    std::sort(picks.begin(), picks.end());
    std::vector<SamplingRegion> out;
    out.reserve(picks.size());
    for (std::size_t i : picks) out.push_back(ranked[i]);
    return out;
}

// Backtracking embedding of `pattern` into `target` (both adjacency lists over
// 0..n-1). Every pattern edge must land on a target edge; with `exact` the
// degrees must also match, which together with equal edge counts makes it an
// isomorphism test.
class Embedder {
   public:
    Embedder(const std::vector<std::vector<int>>& pattern, const std::vector<std::vector<int>>& target, bool exact,
             std::size_t budget)
        : p_(pattern), t_(target), exact_(exact), budget_(budget) {
        const std::size_t nt = t_.size();
        tadj_.assign(nt * nt, 0);
        for (std::size_t a = 0; a < nt; ++a) {
            for (int b : t_[a]) tadj_[a * nt + static_cast<std::size_t>(b)] = 1;
        }
        // Constrained-first order: BFS from the highest-degree vertex of each component.
        const std::size_t np = p_.size();
        std::vector<char> seen(np, 0);
        std::vector<int> by_degree(np);
        std::iota(by_degree.begin(), by_degree.end(), 0);
        std::stable_sort(by_degree.begin(), by_degree.end(),
                         [&](int a, int b) { return p_[static_cast<std::size_t>(a)].size() > p_[static_cast<std::size_t>(b)].size(); });
        for (int s : by_degree) {
            if (seen[static_cast<std::size_t>(s)]) continue;
            std::deque<int> queue{s};
            seen[static_cast<std::size_t>(s)] = 1;
            while (!queue.empty()) {
                const int v = queue.front();
                queue.pop_front();
                order_.push_back(v);
                for (int u : p_[static_cast<std::size_t>(v)]) {
                    if (!seen[static_cast<std::size_t>(u)]) {
                        seen[static_cast<std::size_t>(u)] = 1;
                        queue.push_back(u);
                    }
                }
            }
        }
    }

    bool run(std::vector<int>& mapping) {
        if (p_.size() > t_.size()) return false;
        map_.assign(p_.size(), -1);
        taken_.assign(t_.size(), 0);
        if (!place(0)) return false;
        mapping = map_;
        return true;
    }

   private:
    bool place(std::size_t depth) {
        if (depth == order_.size()) return true;
        if (++nodes_ > budget_) return false;
        const int v = order_[depth];
        const auto& pv = p_[static_cast<std::size_t>(v)];
        const std::size_t nt = t_.size();
        for (std::size_t c = 0; c < nt; ++c) {
            if (taken_[c]) continue;
            if (exact_ ? t_[c].size() != pv.size() : t_[c].size() < pv.size()) continue;
            bool ok = true;
            for (int u : pv) {
                const int mu = map_[static_cast<std::size_t>(u)];
                if (mu >= 0 && !tadj_[c * nt + static_cast<std::size_t>(mu)]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            map_[static_cast<std::size_t>(v)] = static_cast<int>(c);
            taken_[c] = 1;
            if (place(depth + 1)) return true;
            taken_[c] = 0;
            map_[static_cast<std::size_t>(v)] = -1;
            if (nodes_ > budget_) return false;
        }
        return false;
    }

    const std::vector<std::vector<int>>& p_;
    const std::vector<std::vector<int>>& t_;
    bool exact_;
    std::size_t budget_;
    std::vector<char> tadj_;
    std::vector<int> order_;
    std::vector<int> map_;
    std::vector<char> taken_;
    std::size_t nodes_ = 0;
};

std::vector<std::vector<int>> local_adjacency(const SamplingRegion& r) {
    std::vector<std::vector<int>> adj(r.qubits.size());
    auto idx = [&](int q) {
        return static_cast<int>(std::lower_bound(r.qubits.begin(), r.qubits.end(), q) - r.qubits.begin());
    };
    for (const auto& c : r.couplings) {
        const int a = idx(c.u), b = idx(c.v);
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

}  // namespace

bool regions_isomorphic(const SamplingRegion& a, const SamplingRegion& b) {
    if (a.qubits.size() != b.qubits.size() || a.couplings.size() != b.couplings.size()) return false;
    const auto pa = local_adjacency(a);
    const auto pb = local_adjacency(b);
    std::vector<std::size_t> da, db;
    for (const auto& x : pa) da.push_back(x.size());
    for (const auto& x : pb) db.push_back(x.size());
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
    std::vector<int> mapping;
    return Embedder(pa, pb, true, 5'000'000).run(mapping);
}

std::vector<SamplingRegion> select_regions(std::vector<SamplingRegion> candidates, int k, const SelectOptions& opts) {
    if (k < 1) throw InvalidSizeError("k must be at least 1");
    if (candidates.empty()) throw NoRegionError("no candidate regions to select from");
    std::stable_sort(candidates.begin(), candidates.end(), [](const SamplingRegion& a, const SamplingRegion& b) {
        if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
        return a.qubits < b.qubits;
    });
    if (!opts.isomorphic) return select_within(candidates, k, opts.search_budget);

    // Partition into isomorphism classes (in rank order of their best member), select inside each.
    std::vector<std::vector<SamplingRegion>> classes;
    for (auto& c : candidates) {
        bool placed = false;
        for (auto& cls : classes) {
            if (regions_isomorphic(cls.front(), c)) {
                cls.push_back(c);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({c});
    }
    std::vector<SamplingRegion> best;
    SelectionScore best_score;
    for (const auto& cls : classes) {
        auto pick = select_within(cls, k, opts.search_budget);
        const auto score = selection_score(pick);
        if (best.empty() || better(score, best_score)) {
            best = std::move(pick);
            best_score = score;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Step 3: mapping and routing

std::size_t Placement::swap_count() const {
    std::size_t n = 0;
    for (const auto& s : schedule) n += s.swaps.size();
    return n;
}

std::vector<int> Placement::layout_after_forward() const {
    std::vector<int> layout = initial_layout;
    for (const auto& step : schedule) {
        for (auto [a, b] : step.swaps) {
            for (int& p : layout) {
                if (p == a) {
                    p = b;
                } else if (p == b) {
                    p = a;
                }
            }
        }
    }
    return layout;
}

std::vector<int> Placement::final_layout(int layers) const {
    return (layers % 2 == 1) ? layout_after_forward() : initial_layout;
}

namespace {

struct RegionGraph {
    std::vector<int> qubits;                  // local -> physical
    std::vector<std::vector<int>> adj;        // local adjacency
    std::vector<std::vector<int>> dist;       // all-pairs hop distance
    std::vector<std::vector<int>> next_hop;   // next_hop[a][b]: neighbor of a on a shortest a->b path

    int local(int physical) const {
        return static_cast<int>(std::lower_bound(qubits.begin(), qubits.end(), physical) - qubits.begin());
    }
};

RegionGraph build_region_graph(const SamplingRegion& region) {
    RegionGraph g;
    g.qubits = region.qubits;
    g.adj = local_adjacency(region);
    const std::size_t n = g.qubits.size();
    constexpr int kInf = std::numeric_limits<int>::max() / 4;
    g.dist.assign(n, std::vector<int>(n, kInf));
    g.next_hop.assign(n, std::vector<int>(n, -1));
    // BFS from every target: next_hop[a][b] is the lowest-index neighbour of a one step closer to b.
    for (std::size_t b = 0; b < n; ++b) {
        std::deque<int> queue{static_cast<int>(b)};
        g.dist[b][b] = 0;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int u : g.adj[static_cast<std::size_t>(v)]) {
                if (g.dist[static_cast<std::size_t>(u)][b] == kInf) {
                    g.dist[static_cast<std::size_t>(u)][b] = g.dist[static_cast<std::size_t>(v)][b] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            if (g.dist[a][b] >= kInf) throw PlacementError("region is disconnected");
            for (int u : g.adj[a]) {
                if (g.dist[static_cast<std::size_t>(u)][b] == g.dist[a][b] - 1) {
                    g.next_hop[a][b] = u;
                    break;
                }
            }
        }
    }
    return g;
}

// Interaction weights between logical qubits; higher-degree terms spread their
// weight over every pair in the support.
std::vector<std::vector<double>> interaction_weights(const SpinPolynomial& poly) {
    const auto n = static_cast<std::size_t>(poly.num_spins());
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto& t : poly.terms()) {
        if (t.support.size() < 2) continue;
        const double share = std::abs(t.weight) / static_cast<double>(t.support.size() - 1);
        for (std::size_t i = 0; i < t.support.size(); ++i) {
            for (std::size_t j = i + 1; j < t.support.size(); ++j) {
                const auto a = static_cast<std::size_t>(t.support[i]);
                const auto b = static_cast<std::size_t>(t.support[j]);
                w[a][b] += share;
                w[b][a] += share;
            }
        }
    }
    return w;
}

double layout_cost(const std::vector<int>& layout, const std::vector<std::vector<double>>& w, const RegionGraph& g) {
    double cost = 0.0;
    for (std::size_t a = 0; a < layout.size(); ++a) {
        for (std::size_t b = a + 1; b < layout.size(); ++b) {
            if (w[a][b] != 0.0) {
                cost += w[a][b] * (g.dist[static_cast<std::size_t>(layout[a])][static_cast<std::size_t>(layout[b])] - 1);
            }
        }
    }
    return cost;
}

// Local (region-relative) layout, logical -> local index.
std::vector<int> greedy_layout(const std::vector<std::vector<double>>& w, const RegionGraph& g) {
    const std::size_t n = w.size();
    std::vector<double> wdeg(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) wdeg[a] = std::accumulate(w[a].begin(), w[a].end(), 0.0);

    std::vector<int> layout(n, -1);
    std::vector<char> used(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        // Next logical: strongest attachment to the placed set, then weighted degree, then index.
        int pick = -1;
        double pick_attach = -1.0;
        for (std::size_t a = 0; a < n; ++a) {
            if (layout[a] >= 0) continue;
            double attach = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                if (layout[b] >= 0) attach += w[a][b];
            }
            if (pick < 0 || attach > pick_attach ||
                (attach == pick_attach && wdeg[a] > wdeg[static_cast<std::size_t>(pick)])) {
                pick = static_cast<int>(a);
                pick_attach = attach;
            }
        }
        // Physical slot: least weighted distance to placed partners, then highest degree, then index.
        int slot = -1;
        double slot_cost = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            if (used[p]) continue;
            double cost = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                if (layout[b] >= 0) cost += w[static_cast<std::size_t>(pick)][b] * g.dist[p][static_cast<std::size_t>(layout[b])];
            }
            if (slot < 0 || cost < slot_cost ||
                (cost == slot_cost && g.adj[p].size() > g.adj[static_cast<std::size_t>(slot)].size())) {
                slot = static_cast<int>(p);
                slot_cost = cost;
            }
        }
        layout[static_cast<std::size_t>(pick)] = slot;
        used[static_cast<std::size_t>(slot)] = 1;
    }

    // Pairwise-exchange improvement.
    double cost = layout_cost(layout, w, g);
    for (int round = 0; round < 64; ++round) {
        bool improved = false;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                std::swap(layout[a], layout[b]);
                const double c = layout_cost(layout, w, g);
                if (c < cost - 1e-12) {
                    cost = c;
                    improved = true;
                } else {
                    std::swap(layout[a], layout[b]);
                }
            }
        }
        if (!improved) break;
    }
    return layout;
}

}  // namespace

Placement map_circuit(const SpinPolynomial& poly, const SamplingRegion& region) {
    const int n = poly.num_spins();
    if (n != region.size()) {
        throw DimensionError("problem has " + std::to_string(n) + " spins but region has " +
                             std::to_string(region.size()) + " qubits");
    }
    const RegionGraph g = build_region_graph(region);
    const auto w = interaction_weights(poly);

    std::vector<int> local_layout;
    bool embedded = false;
    if (n <= 12) {
        std::vector<std::vector<int>> pattern(static_cast<std::size_t>(n));
        for (const auto& t : poly.terms()) {
            if (t.support.size() != 2) continue;
            pattern[static_cast<std::size_t>(t.support[0])].push_back(t.support[1]);
            pattern[static_cast<std::size_t>(t.support[1])].push_back(t.support[0]);
        }
        embedded = Embedder(pattern, g.adj, false, 2'000'000).run(local_layout);
    }
    if (!embedded) local_layout = greedy_layout(w, g);

    Placement placement;
    placement.region = region;
    placement.initial_layout.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        placement.initial_layout[static_cast<std::size_t>(a)] = g.qubits[static_cast<std::size_t>(local_layout[static_cast<std::size_t>(a)])];
    }

    // Schedule order: |weight| descending, then lexicographic support.
    std::vector<std::size_t> order(poly.terms().size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ta = poly.terms()[a];
        const auto& tb = poly.terms()[b];
        if (std::abs(ta.weight) != std::abs(tb.weight)) return std::abs(ta.weight) > std::abs(tb.weight);
        return ta.support < tb.support;
    });

    std::vector<int> pos = local_layout;  // logical -> local
    std::vector<int> occupant(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) occupant[static_cast<std::size_t>(pos[static_cast<std::size_t>(a)])] = a;
    auto phys_edge = [&](int la, int lb) {
        const int pa = g.qubits[static_cast<std::size_t>(la)];
        const int pb = g.qubits[static_cast<std::size_t>(lb)];
        return PhysicalEdge{std::min(pa, pb), std::max(pa, pb)};
    };

    for (std::size_t ti : order) {
        const auto& term = poly.terms()[ti];
        ScheduledInteraction step;
        step.term_index = ti;
        step.logical = term.support;
        if (term.support.size() == 2) {
            const int a = term.support[0], b = term.support[1];
            // Walk a towards b along a shortest path until adjacent.
            while (g.dist[static_cast<std::size_t>(pos[static_cast<std::size_t>(a)])][static_cast<std::size_t>(pos[static_cast<std::size_t>(b)])] > 1) {
                const int from = pos[static_cast<std::size_t>(a)];
                const int to = g.next_hop[static_cast<std::size_t>(from)][static_cast<std::size_t>(pos[static_cast<std::size_t>(b)])];
                const int displaced = occupant[static_cast<std::size_t>(to)];
                std::swap(occupant[static_cast<std::size_t>(from)], occupant[static_cast<std::size_t>(to)]);
                pos[static_cast<std::size_t>(a)] = to;
                pos[static_cast<std::size_t>(displaced)] = from;
                step.swaps.push_back(phys_edge(from, to));
            }
            step.route.push_back(phys_edge(pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)]));
        } else if (term.support.size() > 2) {
            // Nearest-neighbour chain through the support, concatenating shortest paths.
            std::vector<int> remaining;
            for (int a : term.support) remaining.push_back(pos[static_cast<std::size_t>(a)]);
            std::sort(remaining.begin(), remaining.end());
            int cur = remaining.front();
            remaining.erase(remaining.begin());
            std::set<PhysicalEdge> seen;
            while (!remaining.empty()) {
                auto it = std::min_element(remaining.begin(), remaining.end(), [&](int x, int y) {
                    return std::make_pair(g.dist[static_cast<std::size_t>(cur)][static_cast<std::size_t>(x)], x) <
                           std::make_pair(g.dist[static_cast<std::size_t>(cur)][static_cast<std::size_t>(y)], y);
                });
                const int target = *it;
                remaining.erase(it);
                while (cur != target) {
                    const int nxt = g.next_hop[static_cast<std::size_t>(cur)][static_cast<std::size_t>(target)];
                    const auto e = phys_edge(cur, nxt);
                    if (seen.insert(e).second) step.route.push_back(e);
                    cur = nxt;
                }
            }
        }
        placement.schedule.push_back(std::move(step));
    }
    return placement;
}

void validate_placement(const Placement& placement, const SpinPolynomial& poly, const QpuModel& qpu) {
    const auto& qubits = placement.region.qubits;
    const int n = poly.num_spins();
    if (static_cast<int>(qubits.size()) != n || static_cast<int>(placement.initial_layout.size()) != n) {
        throw PlacementError("placement width does not match the problem");
    }
    std::vector<int> sorted = placement.initial_layout;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != qubits) throw PlacementError("layout is not a bijection onto the region qubits");
    for (int q : qubits) {
        if (q < 0 || q >= qpu.num_qubits()) throw PlacementError("region qubit outside " + qpu.name());
    }
    auto inside = [&](const PhysicalEdge& e) {
        const bool members = std::binary_search(qubits.begin(), qubits.end(), e.first) &&
                             std::binary_search(qubits.begin(), qubits.end(), e.second);
        return members && qpu.coupling_index(e.first, e.second).has_value();
    };
    std::vector<char> covered(poly.terms().size(), 0);
    for (const auto& step : placement.schedule) {
        if (step.term_index >= poly.terms().size()) throw PlacementError("schedule references a missing term");
        covered[step.term_index] = 1;
        for (const auto& e : step.swaps) {
            if (!inside(e)) throw PlacementError("swap edge outside the region or not a coupling");
        }
        for (const auto& e : step.route) {
            if (!inside(e)) throw PlacementError("route edge outside the region or not a coupling");
        }
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
        throw PlacementError("schedule does not cover every cost term");
    }
}

}  // namespace qdisco
