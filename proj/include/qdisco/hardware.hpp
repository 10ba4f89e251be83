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

/// An undirected two-qubit coupling with its gate error, u < v.
struct Coupling {
    int u = 0;
    int v = 0;
    double gate_error = 0.0;

    bool operator==(const Coupling&) const = default;
};

/// Topology plus a static calibration snapshot: per-qubit readout error and
/// per-coupling two-qubit gate error, all probabilities in [0, 1].
class QpuModel {
   public:
    QpuModel() = default;
    QpuModel(std::string name, Eigen::VectorXd readout_error, std::vector<Coupling> couplings);

    const std::string& name() const noexcept { return name_; }
    int num_qubits() const noexcept { return static_cast<int>(readout_error_.size()); }
    const Eigen::VectorXd& readout_error() const noexcept { return readout_error_; }
    double readout_error(int q) const { return readout_error_[q]; }
    const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
    std::span<const int> neighbors(int q) const { return adjacency_[static_cast<std::size_t>(q)]; }

    std::optional<std::size_t> coupling_index(int a, int b) const;
    /// Throws PlacementError when (a, b) is not a coupling.
    double gate_error(int a, int b) const;

    bool operator==(const QpuModel& o) const {
        return name_ == o.name_ && readout_error_ == o.readout_error_ && couplings_ == o.couplings_;
    }

   private:
    std::string name_;
    Eigen::VectorXd readout_error_;
    std::vector<Coupling> couplings_;
    std::vector<std::vector<int>> adjacency_;
};

bool is_connected(const QpuModel& qpu);

struct FleetMember {
    QpuModel qpu;
    std::optional<double> prior_hscore;
};

/// Ordered set of QPUs with unique names.
class Fleet {
   public:
    Fleet() = default;
    explicit Fleet(std::vector<FleetMember> members);

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    const std::vector<FleetMember>& members() const noexcept { return members_; }
    const FleetMember& operator[](std::size_t i) const { return members_[i]; }
    const FleetMember* find(std::string_view name) const;

   private:
    std::vector<FleetMember> members_;
};

/// Parses the calibration schema:
///   {"name": str, "num_qubits": int, "readout_error": [float; n],
///    "edges": [{"q": [u, v], "gate_error": float}, ...]}
/// Directed duplicates (u, v) / (v, u) collapse to the larger error.
QpuModel load_calibration(std::string_view json_text);
QpuModel load_calibration_file(const std::string& path);
std::string serialize_calibration(const QpuModel& qpu);

enum class TopologyKind { line, ring, heavy_hex_16, t_shape_7, grid };

TopologyKind parse_topology_kind(std::string_view name);

struct TopologySpec {
    TopologyKind kind = TopologyKind::line;
    int size = 0;  // line / ring length
    int rows = 0;  // grid
    int cols = 0;
};

struct ErrorProfile {
    enum class Kind { uniform, seeded_random } kind = Kind::uniform;
    double readout = 0.0;  // uniform
    double gate = 0.0;
    double readout_lo = 0.0, readout_hi = 0.0;  // seeded_random
    double gate_lo = 0.0, gate_hi = 0.0;
    std::uint64_t seed = 0;

    static ErrorProfile uniform(double readout, double gate) {
        ErrorProfile p;
        p.readout = readout;
        p.gate = gate;
        return p;
    }
    static ErrorProfile random(double readout_lo, double readout_hi, double gate_lo, double gate_hi,
                               std::uint64_t seed) {
        ErrorProfile p;
        p.kind = Kind::seeded_random;
        p.readout_lo = readout_lo;
        p.readout_hi = readout_hi;
        p.gate_lo = gate_lo;
        p.gate_hi = gate_hi;
        p.seed = seed;
        return p;
    }
};

/// Coupling list of a topology family, without errors.
std::vector<std::pair<int, int>> topology_edges(const TopologySpec& spec, int* num_qubits);

QpuModel synthesize_topology(const TopologySpec& spec, const ErrorProfile& errors, std::string name = {});

}  // namespace qdisco
