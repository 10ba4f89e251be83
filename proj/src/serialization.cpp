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

#include "qdisco/serialization.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include "detail/io_util.hpp"
#include "detail/json_codec.hpp"

namespace qdisco::detail {

namespace {

json edge_list(const std::vector<PhysicalEdge>& edges) {
    json out = json::array();
    for (const auto& [a, b] : edges) out.push_back({a, b});
    return out;
}

std::vector<PhysicalEdge> decode_edges(const json& j, const std::string& where) {
    std::vector<PhysicalEdge> out;
    try {
        for (const auto& e : j) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    } catch (const json::exception& e) {
        throw SchemaError(where, e.what());
    }
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::uint64_t parse_hex64(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 16);
        if (used != s.size()) throw SchemaError(where, "trailing characters in hex value");
        return v;
    } catch (const std::logic_error&) {
        throw SchemaError(where, "expected a hex string");
    }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double null_as_inf(const json& j, const std::string& key) {
    if (!j.contains(key)) throw SchemaError(key, "missing required field");
    return j.at(key).is_null() ? std::numeric_limits<double>::infinity() : require<double>(j, key);
}

json encode_couplings(const std::vector<Coupling>& couplings) {
    json out = json::array();
    for (const auto& c : couplings) out.push_back({{"q", {c.u, c.v}}, {"gate_error", c.gate_error}});
    return out;
}

std::vector<Coupling> decode_couplings(const json& j) {
    std::vector<Coupling> out;
    for (const auto& c : j) {
        const auto q = require<std::vector<int>>(c, "q", "couplings");
        if (q.size() != 2) throw SchemaError("couplings.q", "expected two qubits");
        out.push_back(Coupling{q[0], q[1], require<double>(c, "gate_error", "couplings")});
    }
    return out;
}

}  // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json encode(const QaoaParams& params) { return {{"gammas", params.gammas}, {"betas", params.betas}}; }

QaoaParams decode_params(const json& j) {
    QaoaParams p{require<std::vector<double>>(j, "gammas", "params"), require<std::vector<double>>(j, "betas", "params")};
    p.validate();
    return p;
}

json encode(const SamplingRegion& region) {
    return {{"qubits", region.qubits}, {"couplings", encode_couplings(region.couplings)}, {"fidelity", region.fidelity}};
}

SamplingRegion decode_region(const json& j) {
    SamplingRegion r;
    r.qubits = require<std::vector<int>>(j, "qubits", "region");
    r.couplings = decode_couplings(require<json>(j, "couplings", "region"));
    r.fidelity = require<double>(j, "fidelity", "region");
    return r;
}

json encode(const Placement& placement) {
    json schedule = json::array();
    for (const auto& s : placement.schedule) {
        schedule.push_back({{"term", s.term_index},
                            {"logical", s.logical},
                            {"swaps", edge_list(s.swaps)},
                            {"route", edge_list(s.route)}});
    }
    return {{"region", encode(placement.region)},
            {"initial_layout", placement.initial_layout},
            {"schedule", std::move(schedule)}};
}

Placement decode_placement(const json& j) {
    Placement p;
    p.region = decode_region(require<json>(j, "region", "placement"));
    p.initial_layout = require<std::vector<int>>(j, "initial_layout", "placement");
    for (const auto& s : require<json>(j, "schedule", "placement")) {
        ScheduledInteraction si;
        si.term_index = require<std::size_t>(s, "term", "schedule");
        si.logical = require<std::vector<int>>(s, "logical", "schedule");
        si.swaps = decode_edges(require<json>(s, "swaps", "schedule"), "schedule.swaps");
        si.route = decode_edges(require<json>(s, "route", "schedule"), "schedule.route");
        p.schedule.push_back(std::move(si));
    }
    return p;
}

json encode(const Partition& partition) {
    json cut = json::array();
    for (const auto& e : partition.cut_edges) cut.push_back({e.u, e.v, e.weight});
    return {{"part_of", partition.part_of},
            {"capacities", partition.capacities},
            {"part_sizes", partition.part_sizes()},
            {"cut_edges", std::move(cut)},
            {"cut_weight", partition.cut_weight()}};
}

Partition decode_partition(const json& j) {
    Partition p;
    p.part_of = require<std::vector<int>>(j, "part_of", "partition");
    p.capacities = require<std::vector<int>>(j, "capacities", "partition");
    for (const auto& e : require<json>(j, "cut_edges", "partition")) {
        if (!e.is_array() || e.size() != 3) throw SchemaError("partition.cut_edges", "expected [u, v, w]");
        p.cut_edges.push_back(WeightedEdge{e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return p;
}

json encode(const ExecutionPlan& plan) {
    json tree = json::array();
    for (const auto& n : plan.tree) tree.push_back({{"vertices", n.vertices}, {"children", n.children}, {"depth", n.depth}});
    json leaves = json::array();
    for (const auto& leaf : plan.leaves) {
        json assignments = json::array();
        for (const auto& a : leaf.assignments) {
            json regions = json::array();
            for (const auto& r : a.regions) regions.push_back(encode(r));
            assignments.push_back({{"qpu", a.qpu}, {"regions", std::move(regions)}, {"shots", a.shots}});
        }
        leaves.push_back({{"node", leaf.node}, {"vertices", leaf.vertices}, {"assignments", std::move(assignments)}});
    }
    return {{"num_vertices", plan.num_vertices},
            {"eta", plan.eta},
            {"layers", plan.layers},
            {"shots", plan.shots},
            {"direct", plan.direct},
            {"num_regions", plan.num_regions()},
            {"leaf_sizes", plan.leaf_sizes()},
            {"tree", std::move(tree)},
            {"leaves", std::move(leaves)}};
}

ExecutionPlan decode_plan(const json& j) {
    ExecutionPlan p;
    p.num_vertices = require<int>(j, "num_vertices", "plan");
    p.eta = require<double>(j, "eta", "plan");
    p.layers = require<int>(j, "layers", "plan");
    p.shots = require<std::int64_t>(j, "shots", "plan");
    p.direct = require<bool>(j, "direct", "plan");
    for (const auto& n : require<json>(j, "tree", "plan")) {
        p.tree.push_back(PlanNode{require<std::vector<int>>(n, "vertices", "tree"), require<std::vector<int>>(n, "children", "tree"),
                                  require<int>(n, "depth", "tree")});
    }
    for (const auto& l : require<json>(j, "leaves", "plan")) {
        PlanLeaf leaf;
        leaf.node = require<int>(l, "node", "leaves");
        leaf.vertices = require<std::vector<int>>(l, "vertices", "leaves");
        for (const auto& a : require<json>(l, "assignments", "leaves")) {
            LeafAssignment la;
            la.qpu = require<std::string>(a, "qpu", "assignments");
            for (const auto& r : require<json>(a, "regions", "assignments")) la.regions.push_back(decode_region(r));
            la.shots = require<std::vector<std::int64_t>>(a, "shots", "assignments");
            if (la.shots.size() != la.regions.size()) throw SchemaError("assignments.shots", "one entry per region expected");
            leaf.assignments.push_back(std::move(la));
        }
        p.leaves.push_back(std::move(leaf));
    }
    return p;
}

json encode(const SpeedupReport& report) {
    json chains = json::array();
    for (const auto& [name, t] : report.chains) chains.push_back({{"qpu", name}, {"length", t}});
    return {{"sequential", report.sequential},
            {"parallel", report.parallel},
            {"speedup", report.speedup},
            {"chains", std::move(chains)}};
}

SpeedupReport decode_speedup(const json& j) {
    SpeedupReport r;
    r.sequential = require<double>(j, "sequential", "speedup");
    r.parallel = require<double>(j, "parallel", "speedup");
    r.speedup = require<double>(j, "speedup", "speedup");
    for (const auto& c : require<json>(j, "chains", "speedup")) {
        r.chains.emplace_back(require<std::string>(c, "qpu", "chains"), require<double>(c, "length", "chains"));
    }
    return r;
}

json encode(const RunResult& result) {
    json leaves = json::array();
    for (const auto& leaf : result.leaves) {
        json regions = json::array();
        for (const auto& r : leaf.regions) {
            regions.push_back({{"qpu", r.qpu},
                               {"qubits", r.qubits},
                               {"shots", r.shots},
                               {"best", r.best},
                               {"best_count", r.best_count}});
        }
        leaves.push_back({{"vertices", leaf.vertices},
                          {"size", leaf.vertices.size()},
                          {"params", encode(leaf.params)},
                          {"expectation", leaf.expectation},
                          {"regions", std::move(regions)},
                          {"chosen", leaf.chosen},
                          {"local_cost", leaf.local_cost}});
    }
    json out = {{"assignment", result.assignment.values()},
                {"cost", result.cost},
                {"leaves", std::move(leaves)},
                {"speedup", encode(result.speedup)}};
    out["cut"] = result.cut ? json(*result.cut) : json(nullptr);
    out["concatenated_cut"] = result.concatenated_cut ? json(*result.concatenated_cut) : json(nullptr);
    return out;
}

RunResult decode_run_result(const json& j) {
    RunResult r;
    r.assignment = SpinAssignment(require<std::vector<int>>(j, "assignment", "result"));
    r.cost = require<double>(j, "cost", "result");
    if (j.contains("cut") && !j["cut"].is_null()) r.cut = require<double>(j, "cut", "result");
    if (j.contains("concatenated_cut") && !j["concatenated_cut"].is_null()) {
        r.concatenated_cut = require<double>(j, "concatenated_cut", "result");
    }
    for (const auto& l : require<json>(j, "leaves", "result")) {
        LeafOutcome leaf;
        leaf.vertices = require<std::vector<int>>(l, "vertices", "leaves");
        leaf.params = decode_params(require<json>(l, "params", "leaves"));
        leaf.expectation = require<double>(l, "expectation", "leaves");
        for (const auto& ro : require<json>(l, "regions", "leaves")) {
            leaf.regions.push_back(RegionOutcome{require<std::string>(ro, "qpu", "regions"),
                                                 require<std::vector<int>>(ro, "qubits", "regions"),
                                                 require<std::int64_t>(ro, "shots", "regions"),
                                                 require<BasisIndex>(ro, "best", "regions"),
                                                 require<std::int64_t>(ro, "best_count", "regions")});
        }
        leaf.chosen = require<BasisIndex>(l, "chosen", "leaves");
        leaf.local_cost = require<double>(l, "local_cost", "leaves");
        r.leaves.push_back(std::move(leaf));
    }
    r.speedup = decode_speedup(require<json>(j, "speedup", "result"));
    return r;
}

json encode(const HScoreReport& report) {
    return {{"accuracies", report.accuracies},
            {"scores", report.scores},
            {"c", report.c},
            {"m", report.m},
            {"m_ref", report.m_ref},
            {"layers", report.layers},
            {"problem_hash", hex64(report.problem_hash)}};
}

HScoreReport decode_hscore_report(const json& j) {
    HScoreReport r;
    r.accuracies = require<std::vector<double>>(j, "accuracies", "report");
    r.scores = require<std::vector<double>>(j, "scores", "report");
    r.c = require<double>(j, "c", "report");
    r.m = require<int>(j, "m", "report");
    r.m_ref = require<int>(j, "m_ref", "report");
    r.layers = require<int>(j, "layers", "report");
    r.problem_hash = parse_hex64(require<std::string>(j, "problem_hash", "report"), "report.problem_hash");
    if (r.accuracies.size() != r.scores.size() || static_cast<int>(r.scores.size()) != r.m) {
        throw SchemaError("report", "accuracies, scores and m disagree");
    }
    return r;
}

json encode(const ReferenceDistribution& ref) {
    return {{"problem_hash", hex64(ref.problem_hash())}, {"layers", ref.layers()}, {"samples", ref.samples()}};
}

ReferenceDistribution decode_reference(const json& j) {
    return ReferenceDistribution(parse_hex64(require<std::string>(j, "problem_hash", "reference"), "reference.problem_hash"),
                                 require<int>(j, "layers", "reference"),
                                 require<std::vector<double>>(j, "samples", "reference"));
}

json encode(const ShotCounts& counts) {
    json c = json::object();
    for (const auto& [b, n] : counts.counts()) c[counts.bitstring(b)] = n;
    return {{"num_qubits", counts.num_qubits()}, {"shots", counts.total()}, {"counts", std::move(c)}};
}

ShotCounts decode_shot_counts(const json& j) {
    ShotCounts counts(require<int>(j, "num_qubits", "counts"));
    const auto c = require<json>(j, "counts", "counts");
    if (!c.is_object()) throw SchemaError("counts.counts", "expected an object");
    for (const auto& [bits, n] : c.items()) counts.add(counts.parse_bitstring(bits), n.get<std::int64_t>());
    if (counts.total() != require<std::int64_t>(j, "shots", "counts")) throw SchemaError("counts.shots", "does not match the histogram");
    return counts;
}

json encode(const OptimizationTrace& trace) {
    json entries = json::array();
    for (const auto& e : trace.entries) entries.push_back({{"params", encode(e.params)}, {"value", e.value}});
    json out = {{"entries", std::move(entries)},
                {"best_value", finite_or_null(trace.best_value)},
                {"evaluations", trace.evaluations},
                {"converged", trace.converged}};
    out["best_params"] = trace.entries.empty() ? json(nullptr) : encode(trace.best_params);
    out["error"] = trace.error ? json(*trace.error) : json(nullptr);
    return out;
}

OptimizationTrace decode_trace(const json& j) {
    OptimizationTrace t;
    for (const auto& e : require<json>(j, "entries", "trace")) {
        t.entries.push_back(TraceEntry{decode_params(require<json>(e, "params", "entries")), require<double>(e, "value", "entries")});
    }
    t.best_value = null_as_inf(j, "best_value");
    if (j.contains("best_params") && !j["best_params"].is_null()) t.best_params = decode_params(j["best_params"]);
    t.evaluations = require<int>(j, "evaluations", "trace");
    t.converged = require<bool>(j, "converged", "trace");
    if (j.contains("error") && !j["error"].is_null()) t.error = require<std::string>(j, "error", "trace");
    return t;
}

}  // namespace qdisco::detail

namespace qdisco {

std::string to_json(const Placement& placement) { return detail::dump(detail::encode(placement)); }
std::string to_json(const Partition& partition) { return detail::dump(detail::encode(partition)); }
std::string to_json(const ExecutionPlan& plan) { return detail::dump(detail::encode(plan)); }
std::string to_json(const RunResult& result) { return detail::dump(detail::encode(result)); }
std::string to_json(const HScoreReport& report) { return detail::dump(detail::encode(report)); }
std::string to_json(const ReferenceDistribution& ref) { return detail::dump(detail::encode(ref)); }
std::string to_json(const ShotCounts& counts) { return detail::dump(detail::encode(counts)); }
std::string to_json(const OptimizationTrace& trace) { return detail::dump(detail::encode(trace)); }

Placement placement_from_json(std::string_view text) { return detail::decode_placement(detail::parse_json(text)); }
Partition partition_from_json(std::string_view text) { return detail::decode_partition(detail::parse_json(text)); }
ExecutionPlan plan_from_json(std::string_view text) { return detail::decode_plan(detail::parse_json(text)); }
RunResult run_result_from_json(std::string_view text) { return detail::decode_run_result(detail::parse_json(text)); }
HScoreReport hscore_report_from_json(std::string_view text) { return detail::decode_hscore_report(detail::parse_json(text)); }
ReferenceDistribution reference_from_json(std::string_view text) { return detail::decode_reference(detail::parse_json(text)); }
ShotCounts shot_counts_from_json(std::string_view text) { return detail::decode_shot_counts(detail::parse_json(text)); }
OptimizationTrace trace_from_json(std::string_view text) { return detail::decode_trace(detail::parse_json(text)); }

}  // namespace qdisco
