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

#include "qdisco/hardware.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "detail/io_util.hpp"
#include "qdisco/errors.hpp"
#include "qdisco/random.hpp"

namespace qdisco {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

QpuModel::QpuModel(std::string name, Eigen::VectorXd readout_error, std::vector<Coupling> couplings)
    : name_(std::move(name)), readout_error_(std::move(readout_error)) {
    const int n = num_qubits();
    for (int q = 0; q < n; ++q) {
        if (!is_probability(readout_error_[q])) {
            throw SchemaError("readout_error[" + std::to_string(q) + "]", "probability outside [0, 1]");
        }
    }
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        auto& c = couplings[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (c.u == c.v) throw SchemaError(where, "self-loop");
        if (c.u > c.v) std::swap(c.u, c.v);
        if (c.u < 0 || c.v >= n) throw SchemaError(where, "dangling edge references a missing qubit");
        if (!is_probability(c.gate_error)) throw SchemaError(where + ".gate_error", "probability outside [0, 1]");
    }
    std::sort(couplings.begin(), couplings.end(),
              [](const Coupling& a, const Coupling& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < couplings.size(); ++i) {
        if (couplings[i].u == couplings[i - 1].u && couplings[i].v == couplings[i - 1].v) {
            throw SchemaError("edges", "duplicate coupling (" + std::to_string(couplings[i].u) + ", " +
                                           std::to_string(couplings[i].v) + ")");
        }
    }
    couplings_ = std::move(couplings);
    adjacency_.assign(static_cast<std::size_t>(n), {});
    for (const auto& c : couplings_) {
        adjacency_[static_cast<std::size_t>(c.u)].push_back(c.v);
        adjacency_[static_cast<std::size_t>(c.v)].push_back(c.u);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::optional<std::size_t> QpuModel::coupling_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(couplings_.begin(), couplings_.end(), std::make_pair(a, b),
                               [](const Coupling& c, const std::pair<int, int>& key) {
                                   return std::tie(c.u, c.v) < std::tie(key.first, key.second);
                               });
    if (it == couplings_.end() || it->u != a || it->v != b) return std::nullopt;
    return static_cast<std::size_t>(it - couplings_.begin());
}

double QpuModel::gate_error(int a, int b) const {
    const auto idx = coupling_index(a, b);
    if (!idx) {
        throw PlacementError("(" + std::to_string(a) + ", " + std::to_string(b) + ") is not a coupling of " + name_);
    }
    return couplings_[*idx].gate_error;
}

bool is_connected(const QpuModel& qpu) {
    const int n = qpu.num_qubits();
    if (n == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        const int q = stack.back();
        stack.pop_back();
        for (int r : qpu.neighbors(q)) {
            if (!seen[static_cast<std::size_t>(r)]) {
                seen[static_cast<std::size_t>(r)] = 1;
                ++visited;
                stack.push_back(r);
            }
        }
    }
    return visited == n;
}

Fleet::Fleet(std::vector<FleetMember> members) : members_(std::move(members)) {
    std::set<std::string> names;
    for (const auto& m : members_) {
        if (!names.insert(m.qpu.name()).second) throw SchemaError("fleet", "duplicate QPU name '" + m.qpu.name() + "'");
    }
}

const FleetMember* Fleet::find(std::string_view name) const {
    for (const auto& m : members_) {
        if (m.qpu.name() == name) return &m;
    }
    return nullptr;
}

QpuModel load_calibration(std::string_view json_text) {
    const auto doc = detail::parse_json(json_text);
    if (!doc.is_object()) throw SchemaError("$", "calibration document must be an object");
    auto name = detail::require<std::string>(doc, "name");
    const int n = detail::require<int>(doc, "num_qubits");
    if (n < 1) throw SchemaError("num_qubits", "must be positive");
    const auto readout = detail::require<std::vector<double>>(doc, "readout_error");
    if (static_cast<int>(readout.size()) != n) {
        throw SchemaError("readout_error", "expected " + std::to_string(n) + " entries, got " +
                                               std::to_string(readout.size()));
    }
    const auto raw_edges = detail::require<std::vector<nlohmann::json>>(doc, "edges");

    // Real backends report directed gate errors; keep the worse direction.
    std::map<std::pair<int, int>, double> merged;
    std::set<std::pair<int, int>> directed_seen;
    for (std::size_t i = 0; i < raw_edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        const auto q = detail::require<std::vector<int>>(raw_edges[i], "q", where);
        if (q.size() != 2) throw SchemaError(where + ".q", "expected two qubit indices");
        const double err = detail::require<double>(raw_edges[i], "gate_error", where);
        if (!is_probability(err)) throw SchemaError(where + ".gate_error", "probability outside [0, 1]");
        if (q[0] < 0 || q[0] >= n || q[1] < 0 || q[1] >= n) {
            throw SchemaError(where + ".q", "dangling edge references a missing qubit");
        }
        if (!directed_seen.insert({q[0], q[1]}).second) throw SchemaError(where, "duplicate edge");
        const auto key = std::minmax(q[0], q[1]);
        auto [it, inserted] = merged.emplace(std::make_pair(key.first, key.second), err);
        if (!inserted) it->second = std::max(it->second, err);
    }
    std::vector<Coupling> couplings;
    couplings.reserve(merged.size());
    for (const auto& [key, err] : merged) couplings.push_back(Coupling{key.first, key.second, err});
    return QpuModel(std::move(name), Eigen::Map<const Eigen::VectorXd>(readout.data(), n), std::move(couplings));
}

QpuModel load_calibration_file(const std::string& path) { return load_calibration(detail::read_text_file(path)); }

std::string serialize_calibration(const QpuModel& qpu) {
    nlohmann::json doc;
    doc["name"] = qpu.name();
    doc["num_qubits"] = qpu.num_qubits();
    doc["readout_error"] = std::vector<double>(qpu.readout_error().data(),
                                               qpu.readout_error().data() + qpu.readout_error().size());
    doc["edges"] = nlohmann::json::array();
    for (const auto& c : qpu.couplings()) doc["edges"].push_back({{"q", {c.u, c.v}}, {"gate_error", c.gate_error}});
    return doc.dump(2);
}

TopologyKind parse_topology_kind(std::string_view name) {
    if (name == "line") return TopologyKind::line;
    if (name == "ring") return TopologyKind::ring;
    if (name == "heavy_hex_16") return TopologyKind::heavy_hex_16;
    if (name == "t_shape_7") return TopologyKind::t_shape_7;
    if (name == "grid") return TopologyKind::grid;
    throw SchemaError("topology", "unknown topology kind '" + std::string(name) + "'");
}

std::vector<std::pair<int, int>> topology_edges(const TopologySpec& spec, int* num_qubits) {
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    switch (spec.kind) {
        case TopologyKind::line:
        case TopologyKind::ring:
            n = spec.size;
            if (n < 1) throw InvalidSizeError("line/ring needs at least one qubit");
            if (spec.kind == TopologyKind::ring && n < 3) throw InvalidSizeError("ring needs at least 3 qubits");
            for (int q = 0; q + 1 < n; ++q) edges.emplace_back(q, q + 1);
            if (spec.kind == TopologyKind::ring) edges.emplace_back(0, n - 1);
            break;
        case TopologyKind::heavy_hex_16:
            // 16-qubit heavy-hex device layout: one 12-qubit heavy hexagon plus four pendants.
            n = 16;
            edges = {{0, 1},  {1, 2},  {1, 4},   {2, 3},   {3, 5},   {4, 7},   {5, 8},   {6, 7},
                     {7, 10}, {8, 9},  {8, 11},  {10, 12}, {11, 14}, {12, 13}, {12, 15}, {13, 14}};
            break;
        case TopologyKind::t_shape_7:
            n = 7;
            edges = {{0, 1}, {1, 2}, {1, 3}, {3, 5}, {4, 5}, {5, 6}};
            break;
        case TopologyKind::grid:
            if (spec.rows < 1 || spec.cols < 1) throw InvalidSizeError("grid needs positive rows and cols");
            n = spec.rows * spec.cols;
            for (int r = 0; r < spec.rows; ++r) {
                for (int c = 0; c < spec.cols; ++c) {
                    const int q = r * spec.cols + c;
                    if (c + 1 < spec.cols) edges.emplace_back(q, q + 1);
                    if (r + 1 < spec.rows) edges.emplace_back(q, q + spec.cols);
                }
            }
            break;
        default:
            throw SchemaError("topology", "unknown topology kind");
    }
    if (num_qubits) *num_qubits = n;
    return edges;
}

QpuModel synthesize_topology(const TopologySpec& spec, const ErrorProfile& errors, std::string name) {
    int n = 0;
    const auto edges = topology_edges(spec, &n);
    Eigen::VectorXd readout(n);
    std::vector<Coupling> couplings;
    couplings.reserve(edges.size());
    if (errors.kind == ErrorProfile::Kind::uniform) {
        readout.setConstant(errors.readout);
        for (auto [u, v] : edges) couplings.push_back(Coupling{u, v, errors.gate});
    } else {
        Rng rng(derive_seed(errors.seed, streams::kTopology));
        for (int q = 0; q < n; ++q) readout[q] = uniform_in(rng, errors.readout_lo, errors.readout_hi);
        for (auto [u, v] : edges) couplings.push_back(Coupling{u, v, uniform_in(rng, errors.gate_lo, errors.gate_hi)});
    }
    if (name.empty()) {
        switch (spec.kind) {
            case TopologyKind::line: name = "line_" + std::to_string(n); break;
            case TopologyKind::ring: name = "ring_" + std::to_string(n); break;
            case TopologyKind::heavy_hex_16: name = "heavy_hex_16"; break;
            case TopologyKind::t_shape_7: name = "t_shape_7"; break;
            case TopologyKind::grid: name = "grid_" + std::to_string(spec.rows) + "x" + std::to_string(spec.cols); break;
        }
    }
    return QpuModel(std::move(name), std::move(readout), std::move(couplings));
}

}  // namespace qdisco
