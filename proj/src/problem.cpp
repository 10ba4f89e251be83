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

#include "qdisco/problem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <tuple>

#include "detail/io_util.hpp"
#include "qdisco/errors.hpp"

namespace qdisco {

SpinPolynomial::SpinPolynomial(int num_spins, std::vector<Term> terms, double constant_offset)
    : num_spins_(num_spins), offset_(constant_offset) {
    if (num_spins < 0) throw InvalidSizeError("negative spin count");
    if (!std::isfinite(constant_offset)) throw RangeError("non-finite constant offset");

    std::map<std::vector<int>, double> merged;
    for (auto& t : terms) {
        if (!std::isfinite(t.weight)) throw RangeError("non-finite term weight");
        std::sort(t.support.begin(), t.support.end());
        std::vector<int> reduced;
        for (std::size_t i = 0; i < t.support.size();) {
            const int idx = t.support[i];
            if (idx < 0 || idx >= num_spins) {
                throw DimensionError("term support index " + std::to_string(idx) + " outside [0, " +
                                     std::to_string(num_spins) + ")");
            }
            std::size_t j = i;
            while (j < t.support.size() && t.support[j] == idx) ++j;
            if ((j - i) % 2 == 1) reduced.push_back(idx);
            i = j;
        }
        if (reduced.empty()) {
            offset_ += t.weight;
        } else {
            merged[std::move(reduced)] += t.weight;
        }
    }
    terms_.reserve(merged.size());
    for (auto& [support, weight] : merged) {
        if (weight != 0.0) terms_.push_back(Term{weight, support});
    }
    std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
        if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
        return a.support < b.support;
    });
}

int SpinPolynomial::max_degree() const noexcept {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.support.size()));
    return d;
}

bool SpinPolynomial::all_even_degree() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.support.size() % 2 == 0; });
}

SpinAssignment::SpinAssignment(std::vector<int> values) : values_(std::move(values)) {
    for (int v : values_) {
        if (v != 1 && v != -1) throw RangeError("spin values must be +1 or -1");
    }
}

SpinAssignment SpinAssignment::from_index(BasisIndex b, int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = spin_of_bit(b, i);
    return SpinAssignment(std::move(v));
}

BasisIndex SpinAssignment::to_index() const {
    if (values_.size() > 64) throw CapacityError("assignment wider than 64 spins");
    BasisIndex b = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == -1) b |= BasisIndex{1} << i;
    }
    return b;
}

SpinAssignment SpinAssignment::negated() const {
    SpinAssignment out = *this;
    for (int& v : out.values_) v = -v;
    return out;
}

ProblemGraph::ProblemGraph(int num_vertices, std::vector<WeightedEdge> edges) : num_vertices_(num_vertices) {
    if (num_vertices < 0) throw InvalidSizeError("negative vertex count");
    for (auto& e : edges) {
        if (e.u == e.v) throw SchemaError("edges", "self-loop on vertex " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= num_vertices) {
            throw SchemaError("edges", "vertex index outside [0, " + std::to_string(num_vertices) + ")");
        }
        if (!std::isfinite(e.weight)) throw SchemaError("edges", "non-finite weight");
    }
    std::sort(edges.begin(), edges.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
            throw SchemaError("edges", "duplicate edge (" + std::to_string(edges[i].u) + ", " +
                                           std::to_string(edges[i].v) + ")");
        }
    }
    edges_ = std::move(edges);
}

double ProblemGraph::total_weight() const noexcept {
    double w = 0.0;
    for (const auto& e : edges_) w += e.weight;
    return w;
}

double evaluate_cost(const SpinPolynomial& poly, const SpinAssignment& s) {
    if (s.size() != poly.num_spins()) {
        throw DimensionError("assignment has " + std::to_string(s.size()) + " spins, polynomial expects " +
                             std::to_string(poly.num_spins()));
    }
    double value = poly.constant_offset();
    for (const auto& t : poly.terms()) {
        int prod = 1;
        for (int i : t.support) prod *= s[i];
        value += t.weight * prod;
    }
    return value;
}

namespace {

BasisIndex support_mask(const Term& t) {
    BasisIndex m = 0;
    for (int i : t.support) m |= BasisIndex{1} << i;
    return m;
}

}  // namespace

double evaluate_cost(const SpinPolynomial& poly, BasisIndex b) {
    double value = poly.constant_offset();
    for (const auto& t : poly.terms()) {
        const bool odd = std::popcount(b & support_mask(t)) & 1;
        value += odd ? -t.weight : t.weight;
    }
    return value;
}

Eigen::VectorXd cost_diagonal(const SpinPolynomial& poly) {
    const int n = poly.num_spins();
    if (n > kMaxDenseSpins) {
        throw CapacityError("dense cost diagonal limited to " + std::to_string(kMaxDenseSpins) + " spins, got " +
                            std::to_string(n));
    }
    const auto dim = static_cast<Eigen::Index>(BasisIndex{1} << n);
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(dim, poly.constant_offset());
    for (const auto& t : poly.terms()) {
        const BasisIndex mask = support_mask(t);
        for (Eigen::Index b = 0; b < dim; ++b) {
            const bool odd = std::popcount(static_cast<BasisIndex>(b) & mask) & 1;
            diag[b] += odd ? -t.weight : t.weight;
        }
    }
    return diag;
}

SpinPolynomial maxcut_to_spin_polynomial(const ProblemGraph& g) {
    std::vector<Term> terms;
    terms.reserve(g.edges().size());
    for (const auto& e : g.edges()) terms.push_back(Term{0.5 * e.weight, {e.u, e.v}});
    return SpinPolynomial(g.num_vertices(), std::move(terms), -0.5 * g.total_weight());
}

SpinPolynomial labs_to_spin_polynomial(int n) {
    if (n < 2) throw InvalidSizeError("LABS length must be at least 2, got " + std::to_string(n));
    std::vector<Term> terms;
    for (int k = 1; k < n; ++k) {
        for (int i = 0; i + k < n; ++i) {
            for (int j = 0; j + k < n; ++j) terms.push_back(Term{1.0, {i, i + k, j, j + k}});
        }
    }
    return SpinPolynomial(n, std::move(terms));
}

double labs_energy(const SpinAssignment& s) {
    const int n = s.size();
    double energy = 0.0;
    for (int k = 1; k < n; ++k) {
        int c = 0;
        for (int i = 0; i + k < n; ++i) c += s[i] * s[i + k];
        energy += static_cast<double>(c) * c;
    }
    return energy;
}

double cut_value(const ProblemGraph& g, const SpinAssignment& s) {
    if (s.size() != g.num_vertices()) throw DimensionError("assignment size does not match graph");
    double cut = 0.0;
    for (const auto& e : g.edges()) {
        if (s[e.u] != s[e.v]) cut += e.weight;
    }
    return cut;
}

std::vector<SpinAssignment> Optimum::assignments(int n) const {
    std::vector<SpinAssignment> out;
    out.reserve(argmins.size());
    for (BasisIndex b : argmins) out.push_back(SpinAssignment::from_index(b, n));
    return out;
}

Optimum brute_force_optimum(const SpinPolynomial& poly) {
    const Eigen::VectorXd diag = cost_diagonal(poly);
    Optimum opt;
    opt.min_value = diag.minCoeff();
    const double tol = 1e-9 * std::max(1.0, std::abs(opt.min_value));
    for (Eigen::Index b = 0; b < diag.size(); ++b) {
        if (diag[b] <= opt.min_value + tol) opt.argmins.push_back(static_cast<BasisIndex>(b));
    }
    return opt;
}

int ProblemInstance::num_spins() const {
    if (graph) return graph->num_vertices();
    if (labs) return *labs;
    return 0;
}

SpinPolynomial ProblemInstance::polynomial() const {
    if (graph) return maxcut_to_spin_polynomial(*graph);
    if (labs) return labs_to_spin_polynomial(*labs);
    throw SchemaError("problem", "neither a graph nor a LABS instance");
}

ProblemInstance parse_problem(std::string_view json_text) {
    const auto doc = detail::parse_json(json_text);
    if (!doc.is_object()) throw SchemaError("$", "problem document must be an object");
    ProblemInstance out;
    if (doc.contains("labs")) {
        const int n = detail::require<int>(doc, "labs");
        if (n < 2) throw SchemaError("labs", "LABS length must be at least 2");
        out.labs = n;
        return out;
    }
    const int n = detail::require<int>(doc, "num_vertices");
    if (n < 1) throw SchemaError("num_vertices", "must be positive");
    const auto raw = detail::require<std::vector<nlohmann::json>>(doc, "edges");
    std::vector<WeightedEdge> edges;
    edges.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& e = raw[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (!e.is_array() || (e.size() != 2 && e.size() != 3)) throw SchemaError(where, "expected [u, v, weight]");
        try {
            edges.push_back(WeightedEdge{e[0].get<int>(), e[1].get<int>(), e.size() == 3 ? e[2].get<double>() : 1.0});
        } catch (const nlohmann::json::exception& ex) {
            throw SchemaError(where, ex.what());
        }
    }
    out.graph = ProblemGraph(n, std::move(edges));
    return out;
}

ProblemInstance load_problem_file(const std::string& path) { return parse_problem(detail::read_text_file(path)); }

std::string problem_to_json(const ProblemInstance& problem) {
    nlohmann::json doc;
    if (problem.labs) {
        doc["labs"] = *problem.labs;
    } else if (problem.graph) {
        doc["num_vertices"] = problem.graph->num_vertices();
        doc["edges"] = nlohmann::json::array();
        for (const auto& e : problem.graph->edges()) doc["edges"].push_back({e.u, e.v, e.weight});
    }
    return doc.dump(2);
}

}  // namespace qdisco
